#include "photoattr/dendrogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "photoattr/errors.hpp"

namespace photoattr {

Metric metric_from_string(const std::string& name) {
    if (name == "euclidean") return Metric::Euclidean;
    if (name == "cosine") return Metric::Cosine;
    fail("UnknownMetric", "metric must be 'euclidean' or 'cosine', got '" + name + "'");
}

namespace {

double leaf_distance(const std::vector<double>& a, const std::vector<double>& b, Metric metric) {
    if (metric == Metric::Euclidean) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            double d = a[k] - b[k];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 && nb == 0.0) return 0.0;
    if (na == 0.0 || nb == 0.0) return 1.0;
    return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

Dendrogram agglomerative_dendrogram(const std::map<std::string, std::vector<double>>& vectors,
                                    Metric metric) {
    if (vectors.size() < 2) fail("TooFewAuthors", "need at least 2 vectors to cluster");

    Dendrogram tree;
    std::vector<const std::vector<double>*> data;
    for (const auto& [id, v] : vectors) {  // std::map iterates sorted
        tree.leaves.push_back(id);
        data.push_back(&v);
    }
    const std::size_t n = tree.leaves.size();
    for (std::size_t i = 1; i < n; ++i)
        if (data[i]->size() != data[0]->size())
            fail("DimensionMismatch", "vector for '" + tree.leaves[i] + "' has " +
                                          std::to_string(data[i]->size()) + " dims, expected " +
                                          std::to_string(data[0]->size()));

    // Active clusters, merged pairwise via Lance-Williams (exact for average
    // linkage): d(k, i+j) = (|i| d(k,i) + |j| d(k,j)) / (|i|+|j|).
    struct Cluster {
        std::string id;
        std::string minleaf;
        std::size_t size = 0;
        bool active = true;
    };
    std::vector<Cluster> clusters;
    std::vector<std::vector<double>> dist(2 * n - 1, std::vector<double>(2 * n - 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({tree.leaves[i], tree.leaves[i], 1, true});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = leaf_distance(*data[i], *data[j], metric);

    for (std::size_t merge = 0; merge + 1 < n; ++merge) {
        // Pick the closest active pair; ties break toward the pair whose
        // minimum-leaf ids compare lexicographically least.
        std::size_t best_a = 0, best_b = 0;
        double best_d = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            if (!clusters[a].active) continue;
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                if (!clusters[b].active) continue;
                double d = dist[a][b];
                bool better = false;
                if (!found || d < best_d) {
                    better = true;
                } else if (d == best_d) {
                    auto key = [&](std::size_t p, std::size_t q) {
                        const std::string& mp = clusters[p].minleaf;
                        const std::string& mq = clusters[q].minleaf;
                        return mp < mq ? std::pair(mp, mq) : std::pair(mq, mp);
                    };
                    better = key(a, b) < key(best_a, best_b);
                }
                if (better) {
                    best_a = a;
                    best_b = b;
                    best_d = d;
                    found = true;
                }
            }
        }

        Cluster& ca = clusters[best_a];
        Cluster& cb = clusters[best_b];
        bool a_first = ca.minleaf < cb.minleaf;
        DendrogramMerge rec;
        rec.node_id = "n" + std::to_string(merge);
        rec.left = a_first ? ca.id : cb.id;
        rec.right = a_first ? cb.id : ca.id;
        rec.height = best_d;
        tree.merges.push_back(rec);

        Cluster merged;
        merged.id = rec.node_id;
        merged.minleaf = std::min(ca.minleaf, cb.minleaf);
        merged.size = ca.size + cb.size;
        std::size_t mi = clusters.size();
        for (std::size_t o = 0; o < clusters.size(); ++o) {
            if (!clusters[o].active || o == best_a || o == best_b) continue;
            double d = (static_cast<double>(ca.size) * dist[best_a][o] +
                        static_cast<double>(cb.size) * dist[best_b][o]) /
                       static_cast<double>(merged.size);
            dist[mi][o] = dist[o][mi] = d;
        }
        ca.active = false;
        cb.active = false;
        clusters.push_back(merged);
    }
    return tree;
}

std::string Dendrogram::to_merge_list() const {
    std::ostringstream os;
    os.precision(9);
    for (const auto& m : merges)
        os << '(' << m.left << ", " << m.right << ", " << m.height << ")\n";
    return os.str();
}

namespace {

void render_bracket(const Dendrogram& tree, const std::map<std::string, std::size_t>& node_index,
                    const std::string& id, std::ostringstream& os) {
    auto it = node_index.find(id);
    if (it == node_index.end()) {
        os << id;
        return;
    }
    const auto& m = tree.merges[it->second];
    os << '(';
    render_bracket(tree, node_index, m.left, os);
    os << ", ";
    render_bracket(tree, node_index, m.right, os);
    os << "):" << m.height;
}

}  // namespace

std::string Dendrogram::to_bracket() const {
    if (merges.empty()) return leaves.empty() ? "" : leaves.front();
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < merges.size(); ++i) node_index[merges[i].node_id] = i;
    std::ostringstream os;
    os.precision(6);
    render_bracket(*this, node_index, merges.back().node_id, os);
    return os.str();
}

std::vector<std::string> Dendrogram::members_of(const std::string& node_id) const {
    std::map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < merges.size(); ++i) node_index[merges[i].node_id] = i;
    std::vector<std::string> out;
    std::vector<std::string> stack{node_id};
    while (!stack.empty()) {
        std::string id = stack.back();
        stack.pop_back();
        auto it = node_index.find(id);
        if (it == node_index.end()) {
            if (std::find(leaves.begin(), leaves.end(), id) == leaves.end())
                fail("UnknownNode", "no node or leaf named '" + id + "'");
            out.push_back(id);
        } else {
            stack.push_back(merges[it->second].left);
            stack.push_back(merges[it->second].right);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CohesionReport group_cohesion_report(const Dendrogram& tree,
                                     const std::map<std::string, std::string>& group_of) {
    std::set<std::string> leaf_set(tree.leaves.begin(), tree.leaves.end());
    std::map<std::string, std::set<std::string>> groups;  // tag -> member ids
    for (const auto& [id, tag] : group_of) {
        if (!leaf_set.count(id))
            fail("UnknownAuthorInGroups", "grouped id '" + id + "' is not a dendrogram leaf");
        groups[tag].insert(id);
    }
    if (groups.empty()) fail("EmptyGroups", "no group assignments given");

    // Candidate subtrees in creation order: every leaf, then every merge.
    struct Candidate {
        std::string id;
        double height;
        std::vector<std::string> members;
    };
    std::vector<Candidate> candidates;
    for (const auto& leaf : tree.leaves) candidates.push_back({leaf, 0.0, {leaf}});
    for (const auto& m : tree.merges)
        candidates.push_back({m.node_id, m.height, tree.members_of(m.node_id)});

    CohesionReport report;
    for (const auto& [tag, members] : groups) {
        const Candidate* best = nullptr;
        std::ptrdiff_t best_score = 0;
        for (const auto& cand : candidates) {
            std::size_t captured = 0;
            for (const auto& id : cand.members) captured += members.count(id);
            std::size_t intruders = cand.members.size() - captured;
            std::ptrdiff_t score = static_cast<std::ptrdiff_t>(captured) -
                                   static_cast<std::ptrdiff_t>(intruders);
            if (best == nullptr || score > best_score ||
                (score == best_score && cand.members.size() < best->members.size())) {
                best = &cand;
                best_score = score;
            }
        }
        GroupCohesion gc;
        gc.tag = tag;
        gc.group_size = members.size();
        gc.subtree = best->id;
        gc.subtree_height = best->height;
        for (const auto& id : best->members) {
            if (members.count(id))
                gc.captured_members.push_back(id);
            else
                gc.intruder_members.push_back(id);
        }
        gc.captured = gc.captured_members.size();
        gc.intruders = gc.intruder_members.size();
        report.groups.push_back(std::move(gc));
    }
    return report;
}

std::string CohesionReport::to_text() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& g : groups) {
        os << "group " << g.tag << ": captured " << g.captured << "/" << g.group_size
           << ", intruders " << g.intruders << ", subtree " << g.subtree << ", height "
           << g.subtree_height << '\n';
        os << "  members:";
        for (const auto& id : g.captured_members) os << ' ' << id;
        os << '\n';
        if (!g.intruder_members.empty()) {
            os << "  intruders:";
            for (const auto& id : g.intruder_members) os << ' ' << id;
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace photoattr
