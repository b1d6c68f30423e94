#include "photoattr/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "photoattr/errors.hpp"
#include "photoattr/parallel.hpp"
#include "photoattr/rng.hpp"

namespace photoattr {

namespace {

double sq_dist(const float* a, const double* b, std::uint32_t dim) {
    double acc = 0.0;
    for (std::uint32_t i = 0; i < dim; ++i) {
        const double d = static_cast<double>(a[i]) - b[i];
        acc += d * d;
    }
    return acc;
}

constexpr std::size_t kBlock = 2048;  // fixed block size keeps reductions schedule-independent

}  // namespace

Vocabulary build_vocabulary(const std::vector<float>& data, std::uint32_t dim,
                            const KMeansParams& params, std::uint64_t seed) {
    if (dim == 0) fail("DimensionMismatch", "descriptor dimension must be positive");
    const std::size_t n = data.size() / dim;
    const std::uint32_t k = params.k;
    if (k < 1) fail("TooFewDescriptors", "k must be >= 1");
    if (n < k) {
        fail("TooFewDescriptors",
             "need at least k=" + std::to_string(k) + " descriptors, got " + std::to_string(n));
    }

    Vocabulary vocab;
    vocab.k = k;
    vocab.dim = dim;
    vocab.seed = seed;
    vocab.centroids.resize(static_cast<std::size_t>(k) * dim);

    Rng rng(seed);

    // k-means++ seeding
    std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
    {
        const std::size_t first = static_cast<std::size_t>(rng.below(n));
        for (std::uint32_t j = 0; j < dim; ++j) {
            vocab.centroids[j] = data[first * dim + j];
        }
        for (std::uint32_t c = 1; c < k; ++c) {
            const double* prev = vocab.centroid(c - 1);
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                min_d2[i] = std::min(min_d2[i], sq_dist(&data[i * dim], prev, dim));
                total += min_d2[i];
            }
            std::size_t pick = 0;
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double cum = 0.0;
                pick = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += min_d2[i];
                    if (cum >= target) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = static_cast<std::size_t>(rng.below(n));
            }
            for (std::uint32_t j = 0; j < dim; ++j) {
                vocab.centroids[c * dim + j] = data[pick * dim + j];
            }
        }
    }

    std::vector<std::uint32_t> assign(n, k);
    std::vector<std::uint32_t> prev_assign;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> block_sums(nblocks);
    std::vector<std::vector<std::size_t>> block_counts(nblocks);
    std::vector<double> block_obj(nblocks);

    double prev_objective = std::numeric_limits<double>::infinity();
    for (std::uint32_t iter = 0; iter < params.max_iterations; ++iter) {
        prev_assign = assign;

        parallel_blocks(n, kBlock, [&](std::size_t b, std::size_t lo, std::size_t hi) {
            auto& sums = block_sums[b];
            auto& counts = block_counts[b];
            sums.assign(static_cast<std::size_t>(k) * dim, 0.0);
            counts.assign(k, 0);
            double obj = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const float* x = &data[i * dim];
                double best = std::numeric_limits<double>::infinity();
                std::uint32_t best_c = 0;
                for (std::uint32_t c = 0; c < k; ++c) {
                    const double d = sq_dist(x, vocab.centroid(c), dim);
                    if (d < best) {
                        best = d;
                        best_c = c;
                    }
                }
                assign[i] = best_c;
                obj += best;
                counts[best_c] += 1;
                double* s = &sums[static_cast<std::size_t>(best_c) * dim];
                for (std::uint32_t j = 0; j < dim; ++j) s[j] += x[j];
            }
            block_obj[b] = obj;
        });

        // reduce in block order
        std::vector<double> sums(static_cast<std::size_t>(k) * dim, 0.0);
        std::vector<std::size_t> counts(k, 0);
        double objective = 0.0;
        for (std::size_t b = 0; b < nblocks; ++b) {
            objective += block_obj[b];
            for (std::uint32_t c = 0; c < k; ++c) counts[c] += block_counts[b][c];
            for (std::size_t j = 0; j < sums.size(); ++j) sums[j] += block_sums[b][j];
        }

        if (objective > prev_objective * (1.0 + 1e-12) + 1e-12) {
            fail("ObjectiveIncrease", "k-means objective increased at iteration " +
                                          std::to_string(iter) + ": " + std::to_string(prev_objective) +
                                          " -> " + std::to_string(objective));
        }
        prev_objective = objective;
        vocab.objective_trace.push_back(objective);
        vocab.final_objective = objective;
        vocab.iterations = iter + 1;

        if (assign == prev_assign) break;

        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::uint32_t j = 0; j < dim; ++j) {
                vocab.centroids[static_cast<std::size_t>(c) * dim + j] =
                    sums[static_cast<std::size_t>(c) * dim + j] * inv;
            }
        }

        // reseed empty clusters to the farthest point from its centroid
        std::vector<bool> taken(n, false);
        for (std::uint32_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            double far_d = -1.0;
            std::size_t far_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (taken[i]) continue;
                const double d = sq_dist(&data[i * dim], vocab.centroid(assign[i]), dim);
                if (d > far_d) {
                    far_d = d;
                    far_i = i;
                }
            }
            taken[far_i] = true;
            for (std::uint32_t j = 0; j < dim; ++j) {
                vocab.centroids[static_cast<std::size_t>(c) * dim + j] = data[far_i * dim + j];
            }
        }
    }
    return vocab;
}

std::vector<double> bow_encode(const std::vector<float>& descriptors, std::uint32_t dim,
                               const Vocabulary& vocab) {
    if (dim != vocab.dim) {
        fail("DimensionMismatch", "descriptor dim " + std::to_string(dim) +
                                      " != vocabulary dim " + std::to_string(vocab.dim));
    }
    std::vector<double> hist(vocab.k, 0.0);
    const std::size_t n = dim == 0 ? 0 : descriptors.size() / dim;
    if (n == 0) return hist;  // all-zero histogram flags an empty descriptor set
    for (std::size_t i = 0; i < n; ++i) {
        const float* x = &descriptors[i * dim];
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t best_c = 0;
        for (std::uint32_t c = 0; c < vocab.k; ++c) {
            const double d = sq_dist(x, vocab.centroid(c), dim);
            if (d < best) {  // strict: ties keep the lowest index
                best = d;
                best_c = c;
            }
        }
        hist[best_c] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (double& h : hist) h *= inv;
    return hist;
}

namespace {
constexpr char kVocabMagic[4] = {'P', 'V', 'O', 'C'};
}

void write_vocabulary(const Vocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    out.write(kVocabMagic, 4);
    out.write(reinterpret_cast<const char*>(&vocab.k), 4);
    out.write(reinterpret_cast<const char*>(&vocab.dim), 4);
    out.write(reinterpret_cast<const char*>(&vocab.seed), 8);
    out.write(reinterpret_cast<const char*>(&vocab.final_objective), 8);
    out.write(reinterpret_cast<const char*>(vocab.centroids.data()),
              static_cast<std::streamsize>(vocab.centroids.size() * sizeof(double)));
    if (!out) fail("IoFailure", "write failed: " + path);
}

Vocabulary read_vocabulary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open vocabulary: " + path);
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kVocabMagic, 4) != 0) {
        fail("BadMagic", "not a PVOC file: " + path);
    }
    Vocabulary vocab;
    in.read(reinterpret_cast<char*>(&vocab.k), 4);
    in.read(reinterpret_cast<char*>(&vocab.dim), 4);
    in.read(reinterpret_cast<char*>(&vocab.seed), 8);
    in.read(reinterpret_cast<char*>(&vocab.final_objective), 8);
    if (!in) fail("TruncatedFile", "truncated vocabulary header: " + path);
    vocab.centroids.resize(static_cast<std::size_t>(vocab.k) * vocab.dim);
    const auto bytes = static_cast<std::streamsize>(vocab.centroids.size() * sizeof(double));
    in.read(reinterpret_cast<char*>(vocab.centroids.data()), bytes);
    if (in.gcount() != bytes) fail("TruncatedFile", "truncated vocabulary payload: " + path);
    return vocab;
}

}  // namespace photoattr
