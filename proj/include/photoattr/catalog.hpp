#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace photoattr {

/// One annotated photo. Width/height are optional in the manifest; when
/// present they must be >= 1.
struct PhotoRecord {
    std::string photo_id;
    std::string author_id;
    std::string path;
    std::optional<std::string> source_url;
    std::optional<std::string> title;
    std::optional<std::string> summary;
    std::optional<std::string> subject;
    std::optional<std::uint32_t> width;
    std::optional<std::uint32_t> height;
};

/// The full labeled collection. Immutable after construction; per-author
/// counts always equal the number of records per author.
class Catalog {
public:
    explicit Catalog(std::vector<PhotoRecord> records);

    const std::vector<PhotoRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    /// author_id -> record count, every author has >= 1 record.
    const std::map<std::string, std::size_t>& author_counts() const { return author_counts_; }
    std::vector<std::string> authors() const;

    const PhotoRecord& record(const std::string& photo_id) const;
    bool contains(const std::string& photo_id) const;

private:
    std::vector<PhotoRecord> records_;
    std::map<std::string, std::size_t> author_counts_;
    std::unordered_map<std::string, std::size_t> index_;
};

enum class SplitSet { Train, Validation, Test };

const char* to_string(SplitSet s);
SplitSet split_set_from_string(const std::string& s);

/// Disjoint, exhaustive assignment of every photo to train/validation/test.
/// |test| = round(0.10 N), |validation| = round(0.10 (N - |test|)).
struct SplitAssignment {
    std::unordered_map<std::string, SplitSet> assignment;
    std::uint64_t seed = 0;

    SplitSet at(const std::string& photo_id) const;
    std::vector<std::string> ids_in(SplitSet set) const;
    std::size_t count(SplitSet set) const;
};

/// Parses a JSON-lines manifest (one flat object per line; required keys
/// photo_id, author_id, path). Errors: EmptyManifest, MalformedLine (line
/// number reported), DuplicatePhotoId.
Catalog load_manifest(const std::string& path);

/// Inverse of load_manifest on valid catalogs (stable key order per line).
void write_manifest(const Catalog& catalog, const std::string& path);

struct TableCheck {
    std::string author_id;
    std::size_t expected = 0;
    std::size_t actual = 0;
    bool match = false;
};

struct TableReport {
    std::vector<TableCheck> checks;
    bool pass = true;  // vacuously true for an empty expectation map

    std::string to_text() const;
};

/// Compares per-author counts against an expected table (report-only; authors
/// missing from the catalog count as 0).
TableReport validate_against_table(const Catalog& catalog,
                                   const std::map<std::string, std::size_t>& expected);

/// Uniform per-photo split, deterministic in (catalog, seed). Requires N >= 10
/// (TooFewRecords otherwise).
SplitAssignment make_splits(const Catalog& catalog, std::uint64_t seed);

/// Split file: one `photo_id<TAB>{train|validation|test}` per line after a
/// `# seed=<uint>` header.
void write_split_file(const SplitAssignment& split, const std::string& path);
SplitAssignment read_split_file(const std::string& path);

}  // namespace photoattr
