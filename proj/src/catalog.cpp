#include "photoattr/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "photoattr/errors.hpp"
#include "photoattr/rng.hpp"

namespace photoattr {

using nlohmann::json;

Catalog::Catalog(std::vector<PhotoRecord> records) : records_(std::move(records)) {
    index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& rec = records_[i];
        if (rec.photo_id.empty()) fail("MalformedLine", "record has empty photo_id");
        if (rec.author_id.empty()) fail("MalformedLine", "record has empty author_id");
        if ((rec.width && *rec.width < 1) || (rec.height && *rec.height < 1)) {
            fail("MalformedLine", "record " + rec.photo_id + " has non-positive dimensions");
        }
        if (!index_.emplace(rec.photo_id, i).second) {
            fail("DuplicatePhotoId", "duplicate photo_id: " + rec.photo_id);
        }
        ++author_counts_[rec.author_id];
    }
}

std::vector<std::string> Catalog::authors() const {
    std::vector<std::string> out;
    out.reserve(author_counts_.size());
    for (const auto& [author, count] : author_counts_) out.push_back(author);
    return out;
}

const PhotoRecord& Catalog::record(const std::string& photo_id) const {
    auto it = index_.find(photo_id);
    if (it == index_.end()) fail("UnknownPhotoId", "no such photo_id: " + photo_id);
    return records_[it->second];
}

bool Catalog::contains(const std::string& photo_id) const {
    return index_.find(photo_id) != index_.end();
}

const char* to_string(SplitSet s) {
    switch (s) {
        case SplitSet::Train: return "train";
        case SplitSet::Validation: return "validation";
        case SplitSet::Test: return "test";
    }
    return "?";
}

SplitSet split_set_from_string(const std::string& s) {
    if (s == "train") return SplitSet::Train;
    if (s == "validation") return SplitSet::Validation;
    if (s == "test") return SplitSet::Test;
    fail("MalformedLine", "unknown split set: " + s);
}

SplitSet SplitAssignment::at(const std::string& photo_id) const {
    auto it = assignment.find(photo_id);
    if (it == assignment.end()) fail("UnknownPhotoId", "photo_id not in split: " + photo_id);
    return it->second;
}

std::vector<std::string> SplitAssignment::ids_in(SplitSet set) const {
    std::vector<std::string> out;
    for (const auto& [id, s] : assignment) {
        if (s == set) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SplitAssignment::count(SplitSet set) const {
    std::size_t n = 0;
    for (const auto& [id, s] : assignment) {
        if (s == set) ++n;
    }
    return n;
}

namespace {

std::optional<std::string> opt_string(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
        fail("MalformedLine",
             "line " + std::to_string(line_no) + ": key '" + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::optional<std::uint32_t> opt_u32(const json& obj, const char* key, std::size_t line_no) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() > 0xffffffffULL) {
        fail("MalformedLine",
             "line " + std::to_string(line_no) + ": key '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::uint32_t>(it->get<std::uint64_t>());
}

}  // namespace

Catalog load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open manifest: " + path);

    std::vector<PhotoRecord> records;
    std::string line;
    std::size_t line_no = 0;
    std::unordered_map<std::string, std::size_t> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            fail("MalformedLine", "line " + std::to_string(line_no) + ": not a JSON object");
        }
        PhotoRecord rec;
        auto photo_id = opt_string(obj, "photo_id", line_no);
        auto author_id = opt_string(obj, "author_id", line_no);
        auto rel_path = opt_string(obj, "path", line_no);
        if (!photo_id || !author_id || !rel_path) {
            fail("MalformedLine", "line " + std::to_string(line_no) +
                                      ": missing required key (photo_id, author_id, path)");
        }
        rec.photo_id = *photo_id;
        rec.author_id = *author_id;
        rec.path = *rel_path;
        rec.source_url = opt_string(obj, "source_url", line_no);
        rec.title = opt_string(obj, "title", line_no);
        rec.summary = opt_string(obj, "summary", line_no);
        rec.subject = opt_string(obj, "subject", line_no);
        rec.width = opt_u32(obj, "width", line_no);
        rec.height = opt_u32(obj, "height", line_no);
        if ((rec.width && *rec.width < 1) || (rec.height && *rec.height < 1)) {
            fail("MalformedLine", "line " + std::to_string(line_no) + ": width/height must be >= 1");
        }
        auto prev = seen.emplace(rec.photo_id, line_no);
        if (!prev.second) {
            fail("DuplicatePhotoId", "line " + std::to_string(line_no) +
                                         ": duplicate photo_id '" + rec.photo_id +
                                         "' (first seen at line " +
                                         std::to_string(prev.first->second) + ")");
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) fail("EmptyManifest", "manifest has no records: " + path);
    return Catalog(std::move(records));
}

void write_manifest(const Catalog& catalog, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    for (const auto& rec : catalog.records()) {
        json obj;
        obj["photo_id"] = rec.photo_id;
        obj["author_id"] = rec.author_id;
        obj["path"] = rec.path;
        if (rec.source_url) obj["source_url"] = *rec.source_url;
        if (rec.title) obj["title"] = *rec.title;
        if (rec.summary) obj["summary"] = *rec.summary;
        if (rec.subject) obj["subject"] = *rec.subject;
        if (rec.width) obj["width"] = *rec.width;
        if (rec.height) obj["height"] = *rec.height;
        out << obj.dump() << "\n";
    }
    if (!out) fail("IoFailure", "write failed: " + path);
}

TableReport validate_against_table(const Catalog& catalog,
                                   const std::map<std::string, std::size_t>& expected) {
    TableReport report;
    const auto& counts = catalog.author_counts();
    for (const auto& [author, want] : expected) {
        TableCheck check;
        check.author_id = author;
        check.expected = want;
        auto it = counts.find(author);
        check.actual = it == counts.end() ? 0 : it->second;
        check.match = check.actual == check.expected;
        report.pass = report.pass && check.match;
        report.checks.push_back(std::move(check));
    }
    return report;
}

std::string TableReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.match ? "ok      " : "MISMATCH") << "  " << c.author_id << "  expected "
           << c.expected << "  actual " << c.actual << "\n";
    }
    os << (pass ? "PASS" : "FAIL") << " (" << checks.size() << " authors checked)\n";
    return os.str();
}

SplitAssignment make_splits(const Catalog& catalog, std::uint64_t seed) {
    const std::size_t n = catalog.size();
    if (n < 10) fail("TooFewRecords", "need at least 10 records to split, got " + std::to_string(n));

    const auto n_test = static_cast<std::size_t>(std::llround(0.10 * static_cast<double>(n)));
    const auto n_val =
        static_cast<std::size_t>(std::llround(0.10 * static_cast<double>(n - n_test)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    SplitAssignment split;
    split.seed = seed;
    split.assignment.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SplitSet set = SplitSet::Train;
        if (i < n_test) {
            set = SplitSet::Test;
        } else if (i < n_test + n_val) {
            set = SplitSet::Validation;
        }
        split.assignment.emplace(catalog.records()[order[i]].photo_id, set);
    }
    return split;
}

void write_split_file(const SplitAssignment& split, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    out << "# seed=" << split.seed << "\n";
    std::vector<std::string> ids;
    ids.reserve(split.assignment.size());
    for (const auto& [id, set] : split.assignment) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) {
        out << id << "\t" << to_string(split.assignment.at(id)) << "\n";
    }
    if (!out) fail("IoFailure", "write failed: " + path);
}

SplitAssignment read_split_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open split file: " + path);
    SplitAssignment split;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("seed=");
            if (pos != std::string::npos) {
                split.seed = std::stoull(line.substr(pos + 5));
            }
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            fail("MalformedLine", "split file line " + std::to_string(line_no) + ": missing tab");
        }
        const std::string id = line.substr(0, tab);
        const SplitSet set = split_set_from_string(line.substr(tab + 1));
        if (!split.assignment.emplace(id, set).second) {
            fail("DuplicatePhotoId",
                 "split file line " + std::to_string(line_no) + ": duplicate photo_id " + id);
        }
    }
    if (split.assignment.empty()) fail("EmptyManifest", "split file has no rows: " + path);
    return split;
}

}  // namespace photoattr
