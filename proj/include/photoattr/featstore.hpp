#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace photoattr {

/// Named feature matrix keyed by photo id. Row order is insertion order and
/// is preserved bit-for-bit by the PFV1 file format.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::string feature_name, std::uint32_t dimension);

    const std::string& feature_name() const { return name_; }
    void set_feature_name(std::string name) { name_ = std::move(name); }
    std::uint32_t dimension() const { return dim_; }
    std::size_t rows() const { return ids_.size(); }

    /// Appends a row; the vector length must equal dimension() and the id
    /// must be new.
    void add_row(const std::string& photo_id, std::vector<float> values);

    bool contains(const std::string& photo_id) const;
    const std::vector<float>& row(const std::string& photo_id) const;
    const std::string& id_at(std::size_t i) const { return ids_[i]; }
    const std::vector<float>& row_at(std::size_t i) const { return values_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }

private:
    std::string name_;
    std::uint32_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<std::vector<float>> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// PFV1, little-endian: magic "PFV1", u32 dimension, u32 row count, then per
/// row u32 id byte-length, id bytes, dimension * f32. Values must be finite.
void write_feature_file(const FeatureMatrix& matrix, const std::string& path);

FeatureMatrix read_feature_file(const std::string& path,
                                std::optional<std::uint32_t> expected_dimension = std::nullopt);

/// Ordered author list defining the output-dimension order of a classifier
/// head (FC8) or a trained model.
struct AuthorIndex {
    std::vector<std::string> author_ids;

    std::size_t size() const { return author_ids.size(); }
    const std::string& at(std::size_t i) const { return author_ids[i]; }
};

/// Argmax attribution over a network output row; ties break to the lowest
/// index. Errors: LengthMismatch.
std::string top_rule_classify(const std::vector<float>& fc8_row, const AuthorIndex& index);

}  // namespace photoattr
