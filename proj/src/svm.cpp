#include "photoattr/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "photoattr/errors.hpp"
#include "photoattr/parallel.hpp"
#include "photoattr/rng.hpp"

namespace photoattr {

namespace {

// one binary subproblem: L1-loss dual coordinate descent with the bias as an
// augmented constant-1 feature
void train_binary(const std::vector<const float*>& xs, const std::vector<double>& q_diag,
                  const std::vector<signed char>& y, std::uint32_t dim, const SvmParams& params,
                  std::uint64_t seed, std::vector<double>& w_out, double& bias_out,
                  std::vector<double>& trace_out) {
    const std::size_t n = xs.size();
    const double C = params.C;

    std::vector<double> w(dim + 1, 0.0);
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);

    trace_out.clear();
    for (std::uint32_t epoch = 0; epoch < params.max_epochs; ++epoch) {
        rng.shuffle(order);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (const std::size_t i : order) {
            const float* x = xs[i];
            double dot = w[dim];  // constant-1 feature
            for (std::uint32_t j = 0; j < dim; ++j) dot += w[j] * x[j];
            const double g = y[i] * dot - 1.0;

            double pg = g;
            if (alpha[i] <= 0.0) {
                pg = std::min(g, 0.0);
            } else if (alpha[i] >= C) {
                pg = std::max(g, 0.0);
            }
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);

            if (std::abs(pg) > 1e-12) {
                const double old = alpha[i];
                alpha[i] = std::min(std::max(old - g / q_diag[i], 0.0), C);
                const double delta = (alpha[i] - old) * y[i];
                for (std::uint32_t j = 0; j < dim; ++j) w[j] += delta * x[j];
                w[dim] += delta;
            }
        }

        double sum_alpha = 0.0;
        for (double a : alpha) sum_alpha += a;
        double wnorm2 = 0.0;
        for (double v : w) wnorm2 += v * v;
        trace_out.push_back(sum_alpha - 0.5 * wnorm2);

        if (pg_max - pg_min < params.tolerance) break;
    }

    w_out.assign(w.begin(), w.begin() + dim);
    bias_out = w[dim];
}

}  // namespace

LinearModel train_ova_svm(const FeatureMatrix& features,
                          const std::map<std::string, std::string>& labels,
                          const SvmParams& params, std::uint64_t seed) {
    if (params.C <= 0.0) fail("NonPositiveC", "C must be positive, got " + std::to_string(params.C));
    if (params.tolerance <= 0.0) fail("NonPositiveC", "tolerance must be positive");

    std::set<std::string> class_set;
    for (const auto& [id, author] : labels) {
        if (!features.contains(id)) {
            fail("MissingFeatureRow", "labeled photo has no feature row: " + id);
        }
        class_set.insert(author);
    }
    if (class_set.size() < 2) {
        fail("SingleClass", "one-vs-all training needs >= 2 classes, got " +
                                std::to_string(class_set.size()));
    }

    LinearModel model;
    model.classes.author_ids.assign(class_set.begin(), class_set.end());
    model.dim = features.dimension();
    model.params = params;
    model.feature_name = features.feature_name();
    model.seed = seed;

    // examples in feature-row order restricted to labeled photos
    std::vector<const float*> xs;
    std::vector<std::string> example_labels;
    xs.reserve(labels.size());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        auto it = labels.find(features.id_at(r));
        if (it == labels.end()) continue;
        xs.push_back(features.row_at(r).data());
        example_labels.push_back(it->second);
    }

    std::vector<double> q_diag(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double acc = 1.0;  // constant-1 feature
        for (std::uint32_t j = 0; j < model.dim; ++j) {
            acc += static_cast<double>(xs[i][j]) * xs[i][j];
        }
        q_diag[i] = acc;
    }

    const std::size_t n_classes = model.classes.size();
    model.weights.resize(n_classes);
    model.biases.resize(n_classes);
    model.dual_trace.resize(n_classes);

    parallel_blocks(n_classes, 1, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            const std::string& cls = model.classes.at(c);
            std::vector<signed char> y(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) {
                y[i] = example_labels[i] == cls ? 1 : -1;
            }
            train_binary(xs, q_diag, y, model.dim, params, derive_seed(seed, c),
                         model.weights[c], model.biases[c], model.dual_trace[c]);
        }
    });
    return model;
}

std::vector<double> decision_values(const LinearModel& model, const std::vector<float>& x) {
    if (x.size() != model.dim) {
        fail("DimensionMismatch", "input dim " + std::to_string(x.size()) + " != model dim " +
                                      std::to_string(model.dim));
    }
    std::vector<double> out(model.classes.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        double acc = model.biases[c];
        const auto& w = model.weights[c];
        for (std::uint32_t j = 0; j < model.dim; ++j) acc += w[j] * x[j];
        out[c] = acc;
    }
    return out;
}

std::string predict(const LinearModel& model, const std::vector<float>& x) {
    const auto scores = decision_values(model, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return model.classes.at(best);
}

namespace {
constexpr char kModelMagic[4] = {'P', 'S', 'V', 'M'};
}

void write_model(const LinearModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    out.write(kModelMagic, 4);
    const auto n_classes = static_cast<std::uint32_t>(model.classes.size());
    out.write(reinterpret_cast<const char*>(&model.dim), 4);
    out.write(reinterpret_cast<const char*>(&n_classes), 4);
    for (const auto& author : model.classes.author_ids) {
        const auto len = static_cast<std::uint32_t>(author.size());
        out.write(reinterpret_cast<const char*>(&len), 4);
        out.write(author.data(), len);
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        out.write(reinterpret_cast<const char*>(model.weights[c].data()),
                  static_cast<std::streamsize>(model.dim * sizeof(double)));
        out.write(reinterpret_cast<const char*>(&model.biases[c]), sizeof(double));
    }
    if (!out) fail("IoFailure", "write failed: " + path);
}

LinearModel read_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open model: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0) {
        fail("BadMagic", "not a PSVM file: " + path);
    }
    LinearModel model;
    std::uint32_t n_classes = 0;
    in.read(reinterpret_cast<char*>(&model.dim), 4);
    in.read(reinterpret_cast<char*>(&n_classes), 4);
    if (!in) fail("TruncatedFile", "truncated model header: " + path);
    model.classes.author_ids.resize(n_classes);
    for (auto& author : model.classes.author_ids) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char*>(&len), 4);
        author.resize(len);
        in.read(author.data(), len);
        if (!in) fail("TruncatedFile", "truncated author table: " + path);
    }
    model.weights.resize(n_classes);
    model.biases.resize(n_classes);
    model.dual_trace.assign(n_classes, {0.0});
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        model.weights[c].resize(model.dim);
        in.read(reinterpret_cast<char*>(model.weights[c].data()),
                static_cast<std::streamsize>(model.dim * sizeof(double)));
        in.read(reinterpret_cast<char*>(&model.biases[c]), sizeof(double));
        if (!in) fail("TruncatedFile", "truncated weights at class " + std::to_string(c));
    }
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        for (double v : model.weights[c]) {
            if (!std::isfinite(v)) fail("NonFiniteValue", "model has non-finite weight");
        }
        if (!std::isfinite(model.biases[c])) fail("NonFiniteValue", "model has non-finite bias");
    }
    return model;
}

ExplainResult weighted_nn_explain(const LinearModel& model, const FeatureMatrix& features,
                                  const std::map<std::string, std::string>& labels,
                                  const std::vector<std::string>& train_ids,
                                  const std::string& test_id, const std::string& predicted_class,
                                  const std::string& true_class) {
    const std::vector<float>& x = features.row(test_id);

    auto class_index = [&](const std::string& cls) {
        const auto& ids = model.classes.author_ids;
        const auto it = std::find(ids.begin(), ids.end(), cls);
        if (it == ids.end()) fail("UnknownAuthor", "class not in model: " + cls);
        return static_cast<std::size_t>(it - ids.begin());
    };

    auto nearest = [&](const std::string& cls, std::string& id_out, double& dist_out) {
        const auto& w = model.weights[class_index(cls)];
        double best = std::numeric_limits<double>::infinity();
        const std::string* best_id = nullptr;
        for (const auto& id : train_ids) {
            auto lab = labels.find(id);
            if (lab == labels.end() || lab->second != cls) continue;
            const auto& z = features.row(id);
            double d = 0.0;
            for (std::uint32_t j = 0; j < model.dim; ++j) {
                const double diff = static_cast<double>(x[j]) - z[j];
                d += std::abs(w[j]) * diff * diff;
            }
            if (d < best) {
                best = d;
                best_id = &id;
            }
        }
        if (!best_id) fail("EmptyClass", "no training images for class: " + cls);
        id_out = *best_id;
        dist_out = best;
    };

    ExplainResult result;
    nearest(predicted_class, result.nearest_in_predicted, result.distance_predicted);
    nearest(true_class, result.nearest_in_true, result.distance_true);
    return result;
}

}  // namespace photoattr
