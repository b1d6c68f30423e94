#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photoattr {

/// Visual vocabulary: k centroids over descriptor space.
struct Vocabulary {
    std::uint32_t k = 0;
    std::uint32_t dim = 0;
    std::vector<double> centroids;  // k x dim, row-major
    std::uint64_t seed = 0;
    double final_objective = 0.0;   // sum of squared distances at convergence
    std::uint32_t iterations = 0;
    std::vector<double> objective_trace;  // one entry per Lloyd iteration

    const double* centroid(std::size_t i) const { return centroids.data() + i * dim; }
};

struct KMeansParams {
    std::uint32_t k = 500;
    std::uint32_t max_iterations = 300;
};

/// Seeded k-means++ init followed by Lloyd iterations until the assignment
/// reaches a fixpoint or max_iterations. The objective is checked to be
/// non-increasing after every iteration; empty clusters are reseeded to the
/// point farthest from its centroid. Requires n >= k (TooFewDescriptors).
Vocabulary build_vocabulary(const std::vector<float>& data, std::uint32_t dim,
                            const KMeansParams& params, std::uint64_t seed);

/// Nearest-centroid histogram, L1-normalized; ties go to the lowest centroid
/// index. An empty descriptor set yields the all-zero vector. Errors:
/// DimensionMismatch.
std::vector<double> bow_encode(const std::vector<float>& descriptors, std::uint32_t dim,
                               const Vocabulary& vocab);

/// Vocabulary file (PVOC, little-endian): magic "PVOC", u32 k, u32 dim,
/// u64 seed, f64 final objective, then k*dim f64 centroids.
void write_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary read_vocabulary(const std::string& path);

}  // namespace photoattr
