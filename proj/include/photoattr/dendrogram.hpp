#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace photoattr {

enum class Metric { Euclidean, Cosine };

Metric metric_from_string(const std::string& name);

struct DendrogramMerge {
    std::string node_id;  // "n0", "n1", ...
    std::string left;     // node or leaf id; left holds the lexicographically
    std::string right;    //   smaller minimum leaf
    double height = 0.0;  // average pairwise leaf distance between the sides
};

struct Dendrogram {
    std::vector<std::string> leaves;  // sorted ids
    std::vector<DendrogramMerge> merges;

    std::string to_merge_list() const;  // one "(left, right, height)" line per merge
    std::string to_bracket() const;     // nested (a, b):h text rendering
    /// Leaf ids under a node ("n3") or a single leaf, sorted.
    std::vector<std::string> members_of(const std::string& node_id) const;
};

/// Average-linkage agglomerative clustering over labeled vectors. Equal
/// candidate distances break toward the pair whose smallest member ids are
/// lexicographically least. Errors: TooFewAuthors (< 2), DimensionMismatch.
Dendrogram agglomerative_dendrogram(const std::map<std::string, std::vector<double>>& vectors,
                                    Metric metric);

/// Best subtree per group tag: maximizes members-captured minus intruders;
/// ties prefer smaller subtrees, then earlier-created ones.
struct GroupCohesion {
    std::string tag;
    std::size_t group_size = 0;
    std::size_t captured = 0;
    std::size_t intruders = 0;
    std::string subtree;  // node or leaf id
    double subtree_height = 0.0;
    std::vector<std::string> captured_members;
    std::vector<std::string> intruder_members;
};

struct CohesionReport {
    std::vector<GroupCohesion> groups;  // tag-sorted
    std::string to_text() const;
};

/// Errors: UnknownAuthorInGroups (a grouped id that is not a leaf).
CohesionReport group_cohesion_report(const Dendrogram& tree,
                                     const std::map<std::string, std::string>& group_of);

}  // namespace photoattr
