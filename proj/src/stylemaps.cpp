#include "photoattr/stylemaps.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "photoattr/errors.hpp"

namespace photoattr {

namespace {

// Longest path from node to any root, memoized; flags cycles.
class DepthSolver {
  public:
    explicit DepthSolver(const Hierarchy& h) : hierarchy_(h) {}

    std::size_t depth(const std::string& node) {
        auto it = memo_.find(node);
        if (it != memo_.end()) {
            if (it->second == kVisiting) fail("CyclicHierarchy", "hypernym cycle through '" + node + "'");
            return it->second;
        }
        memo_[node] = kVisiting;
        std::size_t d = 0;
        auto hit = hierarchy_.find(node);
        if (hit != hierarchy_.end()) {
            for (const auto& parent : hit->second) d = std::max(d, depth(parent) + 1);
        }
        memo_[node] = d;
        return d;
    }

  private:
    static constexpr std::size_t kVisiting = std::numeric_limits<std::size_t>::max();
    const Hierarchy& hierarchy_;
    std::map<std::string, std::size_t> memo_;
};

}  // namespace

CollapseMap build_collapse_map(const Hierarchy& hierarchy, const std::vector<std::string>& dims,
                               const std::vector<ChosenSynset>& chosen,
                               const std::string& fallback_label) {
    if (dims.empty()) fail("EmptyDims", "no dimensions to collapse");

    std::set<std::string> known;
    for (const auto& [child, parents] : hierarchy) {
        known.insert(child);
        known.insert(parents.begin(), parents.end());
    }
    std::map<std::string, std::size_t> chosen_rank;  // synset -> position in chosen order
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (!chosen_rank.emplace(chosen[i].synset_id, i).second)
            fail("DuplicateSynset", "chosen synset '" + chosen[i].synset_id + "' listed twice");
        known.insert(chosen[i].synset_id);
    }

    DepthSolver depths(hierarchy);

    // For each dimension, walk all upward paths and keep the best chosen
    // ancestor: deepest first, then lexicographically smallest id.
    std::vector<std::ptrdiff_t> dim_choice(dims.size(), -1);  // index into `chosen`, -1 = fallback
    for (std::size_t d = 0; d < dims.size(); ++d) {
        const std::string& id = dims[d];
        if (!known.count(id)) fail("UnknownSynset", "dimension synset '" + id + "' not in hierarchy");
        std::set<std::string> seen;
        std::vector<std::string> stack{id};
        std::string best_id;
        std::size_t best_depth = 0;
        bool found = false;
        while (!stack.empty()) {
            std::string node = stack.back();
            stack.pop_back();
            if (!seen.insert(node).second) continue;
            auto cit = chosen_rank.find(node);
            if (cit != chosen_rank.end()) {
                std::size_t nd = depths.depth(node);
                if (!found || nd > best_depth || (nd == best_depth && node < best_id)) {
                    best_id = node;
                    best_depth = nd;
                    found = true;
                }
            }
            auto hit = hierarchy.find(node);
            if (hit != hierarchy.end())
                for (const auto& parent : hit->second) stack.push_back(parent);
        }
        if (found) dim_choice[d] = static_cast<std::ptrdiff_t>(chosen_rank.at(best_id));
    }

    // Effective labels: chosen order, only non-empty groups, fallback last.
    CollapseMap map;
    map.dims = dims;
    std::vector<std::ptrdiff_t> label_of_choice(chosen.size(), -1);
    for (std::size_t c = 0; c < chosen.size(); ++c) {
        bool used = false;
        for (std::size_t d = 0; d < dims.size(); ++d)
            if (dim_choice[d] == static_cast<std::ptrdiff_t>(c)) { used = true; break; }
        if (used) {
            label_of_choice[c] = static_cast<std::ptrdiff_t>(map.labels.size());
            map.labels.push_back(chosen[c].label);
        }
    }
    std::ptrdiff_t fallback_index = -1;
    if (std::any_of(dim_choice.begin(), dim_choice.end(), [](std::ptrdiff_t c) { return c < 0; })) {
        fallback_index = static_cast<std::ptrdiff_t>(map.labels.size());
        map.labels.push_back(fallback_label);
    }

    map.mapping.resize(dims.size());
    map.group_sizes.assign(map.labels.size(), 0);
    for (std::size_t d = 0; d < dims.size(); ++d) {
        std::ptrdiff_t label = dim_choice[d] >= 0 ? label_of_choice[dim_choice[d]] : fallback_index;
        map.mapping[d] = static_cast<std::size_t>(label);
        ++map.group_sizes[static_cast<std::size_t>(label)];
    }
    return map;
}

std::vector<double> collapse_vector(const std::vector<double>& v, const CollapseMap& map) {
    if (v.size() != map.dims.size())
        fail("DimensionMismatch", "vector has " + std::to_string(v.size()) + " dims, map expects " +
                                      std::to_string(map.dims.size()));
    std::vector<double> out(map.labels.size(), 0.0);
    for (std::size_t d = 0; d < v.size(); ++d) out[map.mapping[d]] += v[d];
    for (std::size_t g = 0; g < out.size(); ++g) out[g] /= static_cast<double>(map.group_sizes[g]);
    return out;
}

std::string ResponseMatrix::to_tsv() const {
    std::ostringstream os;
    os << "author";
    for (const auto& label : labels) os << '\t' << label;
    os << '\n';
    os.setf(std::ios::fmtflags(0), std::ios::floatfield);
    os.precision(9);
    for (std::size_t r = 0; r < row_ids.size(); ++r) {
        os << row_ids[r];
        for (double cell : cells[r]) os << '\t' << cell;
        os << '\n';
    }
    return os.str();
}

namespace {

void finish_minmax(ResponseMatrix& m) {
    m.min_value = 0.0;
    m.max_value = 0.0;
    bool first = true;
    for (const auto& row : m.cells)
        for (double v : row) {
            if (first) { m.min_value = m.max_value = v; first = false; }
            m.min_value = std::min(m.min_value, v);
            m.max_value = std::max(m.max_value, v);
        }
}

}  // namespace

ResponseMatrix author_response_matrix(const FeatureMatrix& features,
                                      const std::map<std::string, std::string>& labels,
                                      const CollapseMap& map) {
    if (features.dimension() != map.dims.size())
        fail("DimensionMismatch", "feature dimension " + std::to_string(features.dimension()) +
                                      " does not match collapse map " + std::to_string(map.dims.size()));
    // Mean raw vector per author, authors in sorted order.
    std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const std::string& photo = features.ids()[r];
        auto it = labels.find(photo);
        if (it == labels.end()) fail("MissingLabel", "no author label for photo '" + photo + "'");
        auto& [sum, count] = sums[it->second];
        if (sum.empty()) sum.assign(features.dimension(), 0.0);
        const auto& row = features.row_at(r);
        for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
        ++count;
    }
    ResponseMatrix out;
    out.labels = map.labels;
    for (auto& [author, acc] : sums) {
        auto& [sum, count] = acc;
        for (double& v : sum) v /= static_cast<double>(count);
        out.row_ids.push_back(author);
        out.cells.push_back(collapse_vector(sum, map));
    }
    finish_minmax(out);
    return out;
}

ResponseMatrix collapse_model_weights(const LinearModel& model, const CollapseMap& map) {
    if (model.dim != map.dims.size())
        fail("DimensionMismatch", "model dimension " + std::to_string(model.dim) +
                                      " does not match collapse map " + std::to_string(map.dims.size()));
    ResponseMatrix out;
    out.labels = map.labels;
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        out.row_ids.push_back(model.classes.at(c));
        out.cells.push_back(collapse_vector(model.weights[c], map));
    }
    finish_minmax(out);
    return out;
}

std::vector<std::string> top_k_categories(const FeatureMatrix& features,
                                          const std::map<std::string, std::string>& labels,
                                          const std::string& author_id, std::size_t k,
                                          const std::vector<std::string>& dim_labels) {
    if (dim_labels.size() != features.dimension())
        fail("DimensionMismatch", "have " + std::to_string(dim_labels.size()) + " dimension labels for " +
                                      std::to_string(features.dimension()) + " dimensions");
    std::vector<double> mean(features.dimension(), 0.0);
    std::size_t count = 0;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        auto it = labels.find(features.ids()[r]);
        if (it == labels.end() || it->second != author_id) continue;
        const auto& row = features.row_at(r);
        for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
        ++count;
    }
    if (count == 0) fail("UnknownAuthor", "no feature rows labeled '" + author_id + "'");
    for (double& v : mean) v /= static_cast<double>(count);

    std::vector<std::size_t> order(mean.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (mean[a] != mean[b]) return mean[a] > mean[b];
        return dim_labels[a] < dim_labels[b];
    });
    std::vector<std::string> out;
    for (std::size_t j = 0; j < order.size() && j < k; ++j) out.push_back(dim_labels[order[j]]);
    return out;
}

Hierarchy load_hierarchy(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open hierarchy file '" + path + "'");
    Hierarchy h;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            fail("MalformedLine", "hierarchy line " + std::to_string(lineno) + ": expected child<TAB>parent");
        h[line.substr(0, tab)].push_back(line.substr(tab + 1));
    }
    return h;
}

std::vector<ChosenSynset> load_synset_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoFailure", "cannot open synset list '" + path + "'");
    std::vector<ChosenSynset> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            out.push_back({line, line});
        else
            out.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    if (out.empty()) fail("EmptyList", "synset list '" + path + "' has no entries");
    return out;
}

}  // namespace photoattr
