#include "photoattr/runlog.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "photoattr/errors.hpp"

namespace photoattr {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ull;  // FNV-1a 64 offset basis
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return buf;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open '" + path + "' for digesting");
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    return digest_hex(hash);
}

void append_run_record(const std::string& log_path, const std::string& subcommand,
                       const std::vector<std::string>& args,
                       const std::vector<std::string>& input_paths) {
    std::ostringstream joined;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) joined << ' ';
        joined << args[i];
    }
    std::string arg_text = joined.str();

    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

    std::ofstream out(log_path, std::ios::app);
    if (!out) fail("IoFailure", "cannot append to run log '" + log_path + "'");
    out << stamp << ' ' << subcommand << ' '
        << digest_hex(fnv1a64(arg_text.data(), arg_text.size())) << ' ' << arg_text;
    if (!input_paths.empty()) {
        out << " |";
        for (const auto& path : input_paths) out << ' ' << path << '=' << file_digest(path);
    }
    out << '\n';
}

}  // namespace photoattr
