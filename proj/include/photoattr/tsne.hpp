#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace photoattr {

struct TsneParams {
    double perplexity = 30.0;
    std::uint32_t iterations = 1000;
    double learning_rate = 200.0;
    double exaggeration = 4.0;
    std::uint32_t exaggeration_iters = 100;
    // Tail of the run uses plain gradient descent with backtracking so the
    // objective cannot move upward once exploration is over.
    std::uint32_t monotone_tail_iters = 100;
};

struct Embedding2D {
    std::vector<std::string> ids;
    std::vector<std::array<double, 2>> points;
    std::vector<double> kl_trace;  // KL against the un-exaggerated P, per iteration
    double final_kl = 0.0;
    double perplexity = 0.0;
    std::uint64_t seed = 0;

    std::string to_tsv() const;
};

/// Row-stochastic conditional Gaussians with per-row bandwidth found by
/// binary search on Shannon entropy (bits). Exposed for verification.
struct ConditionalGaussians {
    std::size_t n = 0;
    std::vector<double> p;          // n*n, row-major, diagonal zero, rows sum to 1
    std::vector<double> entropies;  // bits
    std::vector<double> betas;      // precision = 1/(2*sigma^2)
};

ConditionalGaussians conditional_gaussians(const std::vector<std::vector<double>>& x,
                                           double perplexity);

/// Exact t-SNE to 2-D. Errors: TooFewPoints (n < 4 or n < perplexity + 2),
/// BadPerplexity, DimensionMismatch (ids vs rows or ragged rows).
Embedding2D tsne_embed(const std::vector<std::string>& ids,
                       const std::vector<std::vector<double>>& x, const TsneParams& params,
                       std::uint64_t seed);

}  // namespace photoattr
