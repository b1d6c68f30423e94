#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "photoattr/featstore.hpp"
#include "photoattr/svm.hpp"

namespace photoattr {

/// Total dimension -> coarse-label mapping obtained by walking up a hypernym
/// hierarchy. labels holds only coarse labels that received at least one
/// dimension, in chosen order, with the fallback last when used.
struct CollapseMap {
    std::vector<std::string> dims;        // source synset id per dimension
    std::vector<std::string> labels;      // effective coarse labels
    std::vector<std::size_t> mapping;     // dimension index -> label index
    std::vector<std::size_t> group_sizes; // per label

    std::size_t dimension() const { return dims.size(); }
};

/// Hierarchy: child synset id -> parent synset ids (a DAG; multiple parents
/// allowed). Node depth is the longest path to a root.
using Hierarchy = std::map<std::string, std::vector<std::string>>;

struct ChosenSynset {
    std::string synset_id;
    std::string label;
};

/// Maps every dimension to the deepest chosen synset reachable by upward
/// traversal (a chosen dimension maps to itself); equal depths break to the
/// lexicographically smallest synset id; no chosen ancestor falls back to
/// fallback_label. Errors: CyclicHierarchy, UnknownSynset.
CollapseMap build_collapse_map(const Hierarchy& hierarchy, const std::vector<std::string>& dims,
                               const std::vector<ChosenSynset>& chosen,
                               const std::string& fallback_label);

/// Per-label means of v's dimensions. Errors: DimensionMismatch.
std::vector<double> collapse_vector(const std::vector<double>& v, const CollapseMap& map);

/// Author x coarse-label matrix. min/max are rendering metadata for
/// sign-split (positive/negative) heatmaps.
struct ResponseMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> cells;
    double min_value = 0.0;
    double max_value = 0.0;

    std::string to_tsv() const;
};

/// Row per author: collapse of the mean of that author's feature rows.
/// Errors: MissingLabel (a feature row without a label).
ResponseMatrix author_response_matrix(const FeatureMatrix& features,
                                      const std::map<std::string, std::string>& labels,
                                      const CollapseMap& map);

/// Row per class: collapse of the class's weight vector (bias excluded).
/// Errors: DimensionMismatch.
ResponseMatrix collapse_model_weights(const LinearModel& model, const CollapseMap& map);

/// k dimension labels with the largest mean response over the author's raw
/// (uncollapsed) vectors, descending; ties in lexicographic label order.
/// Errors: UnknownAuthor, DimensionMismatch.
std::vector<std::string> top_k_categories(const FeatureMatrix& features,
                                          const std::map<std::string, std::string>& labels,
                                          const std::string& author_id, std::size_t k,
                                          const std::vector<std::string>& dim_labels);

/// Text loaders. Hierarchy file: `child<TAB>parent` per line. Synset list
/// file: `synset_id[<TAB>label]` per line (label defaults to the id).
Hierarchy load_hierarchy(const std::string& path);
std::vector<ChosenSynset> load_synset_list(const std::string& path);

}  // namespace photoattr
