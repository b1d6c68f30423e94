#include "photoattr/featstore.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "photoattr/errors.hpp"

namespace photoattr {

static_assert(std::endian::native == std::endian::little,
              "PFV1 serialization assumes a little-endian host");

FeatureMatrix::FeatureMatrix(std::string feature_name, std::uint32_t dimension)
    : name_(std::move(feature_name)), dim_(dimension) {}

void FeatureMatrix::add_row(const std::string& photo_id, std::vector<float> values) {
    if (values.size() != dim_) {
        fail("DimensionMismatch", "row '" + photo_id + "' has length " +
                                      std::to_string(values.size()) + ", expected " +
                                      std::to_string(dim_));
    }
    if (!index_.emplace(photo_id, ids_.size()).second) {
        fail("DuplicatePhotoId", "duplicate feature row: " + photo_id);
    }
    ids_.push_back(photo_id);
    values_.push_back(std::move(values));
}

bool FeatureMatrix::contains(const std::string& photo_id) const {
    return index_.find(photo_id) != index_.end();
}

const std::vector<float>& FeatureMatrix::row(const std::string& photo_id) const {
    auto it = index_.find(photo_id);
    if (it == index_.end()) fail("MissingFeatureRow", "no feature row for photo_id: " + photo_id);
    return values_[it->second];
}

namespace {

constexpr char kMagic[4] = {'P', 'F', 'V', '1'};

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}

bool get_u32(std::ifstream& in, std::uint32_t& v) {
    in.read(reinterpret_cast<char*>(&v), 4);
    return in.gcount() == 4;
}

}  // namespace

void write_feature_file(const FeatureMatrix& matrix, const std::string& path) {
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (float v : matrix.row_at(r)) {
            if (!std::isfinite(v)) {
                fail("NonFiniteValue", "row '" + matrix.id_at(r) + "' contains a non-finite value");
            }
        }
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    out.write(kMagic, 4);
    put_u32(out, matrix.dimension());
    put_u32(out, static_cast<std::uint32_t>(matrix.rows()));
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const std::string& id = matrix.id_at(r);
        put_u32(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
        const auto& vals = matrix.row_at(r);
        out.write(reinterpret_cast<const char*>(vals.data()),
                  static_cast<std::streamsize>(vals.size() * sizeof(float)));
    }
    if (!out) fail("IoFailure", "write failed: " + path);
}

FeatureMatrix read_feature_file(const std::string& path,
                                std::optional<std::uint32_t> expected_dimension) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open feature file: " + path);

    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
        fail("BadMagic", "not a PFV1 file: " + path);
    }
    std::uint32_t dim = 0, rows = 0;
    if (!get_u32(in, dim) || !get_u32(in, rows)) {
        fail("TruncatedFile", "truncated header: " + path);
    }
    if (expected_dimension && dim != *expected_dimension) {
        fail("DimensionMismatch", path + ": file dimension " + std::to_string(dim) +
                                      " != expected " + std::to_string(*expected_dimension));
    }

    FeatureMatrix matrix("", dim);
    for (std::uint32_t r = 0; r < rows; ++r) {
        std::uint32_t id_len = 0;
        if (!get_u32(in, id_len)) {
            fail("TruncatedFile", path + ": truncated at row " + std::to_string(r));
        }
        std::string id(id_len, '\0');
        in.read(id.data(), id_len);
        if (in.gcount() != static_cast<std::streamsize>(id_len)) {
            fail("TruncatedFile", path + ": truncated at row " + std::to_string(r));
        }
        std::vector<float> vals(dim);
        const auto bytes = static_cast<std::streamsize>(std::size_t{dim} * sizeof(float));
        in.read(reinterpret_cast<char*>(vals.data()), bytes);
        if (in.gcount() != bytes) {
            fail("TruncatedFile", path + ": truncated at row " + std::to_string(r));
        }
        matrix.add_row(id, std::move(vals));
    }
    return matrix;
}

std::string top_rule_classify(const std::vector<float>& fc8_row, const AuthorIndex& index) {
    if (fc8_row.size() != index.size()) {
        fail("LengthMismatch", "vector length " + std::to_string(fc8_row.size()) +
                                   " != author index length " + std::to_string(index.size()));
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < fc8_row.size(); ++i) {
        if (fc8_row[i] > fc8_row[best]) best = i;
    }
    return index.at(best);
}

}  // namespace photoattr
