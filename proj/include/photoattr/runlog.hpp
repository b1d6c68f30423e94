#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photoattr {

/// FNV-1a 64-bit digest, rendered as 16 hex digits.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string digest_hex(std::uint64_t digest);

/// Digest of a file's bytes. Errors: IoFailure.
std::string file_digest(const std::string& path);

/// Appends one reproducibility record to an append-only text log:
/// `<utc-iso8601> <subcommand> <digest(args)> args... | input digests`.
void append_run_record(const std::string& log_path, const std::string& subcommand,
                       const std::vector<std::string>& args,
                       const std::vector<std::string>& input_paths);

}  // namespace photoattr
