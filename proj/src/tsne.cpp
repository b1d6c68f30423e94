#include "photoattr/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photoattr/errors.hpp"
#include "photoattr/rng.hpp"

namespace photoattr {

namespace {

constexpr double kProbFloor = 1e-12;

std::vector<double> pairwise_sq(const std::vector<std::vector<double>>& x) {
    const std::size_t n = x.size();
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < x[i].size(); ++k) {
                double diff = x[i][k] - x[j][k];
                s += diff * diff;
            }
            d2[i * n + j] = s;
            d2[j * n + i] = s;
        }
    return d2;
}

// Entropy (bits) and conditional row for a given precision beta.
double row_entropy(const std::vector<double>& d2, std::size_t n, std::size_t i, double beta,
                   std::vector<double>& row) {
    double dmin = 0.0;
    bool first = true;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (first || d2[i * n + j] < dmin) { dmin = d2[i * n + j]; first = false; }
    }
    double sum = 0.0, moment = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) { row[j] = 0.0; continue; }
        double shifted = d2[i * n + j] - dmin;
        double w = std::exp(-beta * shifted);
        row[j] = w;
        sum += w;
        moment += w * shifted;
    }
    for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
    double h_nats = std::log(sum) + beta * moment / sum;
    return h_nats / std::log(2.0);
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q, std::size_t n) {
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double pij = p[i * n + j];
            if (pij <= 0.0) continue;
            kl += pij * std::log(pij / std::max(q[i * n + j], kProbFloor));
        }
    return kl;
}

// Student-t affinities; returns q (normalized, floored) and the raw kernel w.
void compute_q(const std::vector<std::array<double, 2>>& y, std::vector<double>& w,
               std::vector<double>& q) {
    const std::size_t n = y.size();
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) { w[i * n + j] = 0.0; continue; }
            double dx = y[i][0] - y[j][0];
            double dy = y[i][1] - y[j][1];
            double kernel = 1.0 / (1.0 + dx * dx + dy * dy);
            w[i * n + j] = kernel;
            z += kernel;
        }
    for (std::size_t i = 0; i < n * n; ++i) q[i] = std::max(w[i] / z, kProbFloor);
}

void center(std::vector<std::array<double, 2>>& y) {
    double mx = 0.0, my = 0.0;
    for (const auto& p : y) { mx += p[0]; my += p[1]; }
    mx /= static_cast<double>(y.size());
    my /= static_cast<double>(y.size());
    for (auto& p : y) { p[0] -= mx; p[1] -= my; }
}

}  // namespace

ConditionalGaussians conditional_gaussians(const std::vector<std::vector<double>>& x,
                                           double perplexity) {
    const std::size_t n = x.size();
    if (perplexity < 1.0) fail("BadPerplexity", "perplexity must be >= 1");
    if (n < 4 || static_cast<double>(n) < perplexity + 2.0)
        fail("TooFewPoints", "need at least max(4, perplexity+2) points, have " + std::to_string(n));
    for (const auto& row : x)
        if (row.size() != x[0].size()) fail("DimensionMismatch", "ragged input rows");

    auto d2 = pairwise_sq(x);
    const double target = std::log2(perplexity);

    ConditionalGaussians out;
    out.n = n;
    out.p.assign(n * n, 0.0);
    out.entropies.assign(n, 0.0);
    out.betas.assign(n, 0.0);

    std::vector<double> row(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0, lo = 0.0, hi = 0.0;
        bool has_lo = false, has_hi = false;
        double h = 0.0;
        for (int iter = 0; iter < 200; ++iter) {
            h = row_entropy(d2, n, i, beta, row);
            if (std::abs(h - target) < 1e-9) break;
            if (h > target) {  // too flat: raise precision
                lo = beta;
                has_lo = true;
                beta = has_hi ? (beta + hi) / 2.0 : beta * 2.0;
            } else {
                hi = beta;
                has_hi = true;
                beta = has_lo ? (beta + lo) / 2.0 : beta / 2.0;
            }
        }
        out.entropies[i] = h;
        out.betas[i] = beta;
        for (std::size_t j = 0; j < n; ++j) out.p[i * n + j] = row[j];
    }
    return out;
}

std::string Embedding2D::to_tsv() const {
    std::ostringstream os;
    os.precision(9);
    os << "id\tx\ty\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        os << ids[i] << '\t' << points[i][0] << '\t' << points[i][1] << '\n';
    return os.str();
}

Embedding2D tsne_embed(const std::vector<std::string>& ids,
                       const std::vector<std::vector<double>>& x, const TsneParams& params,
                       std::uint64_t seed) {
    if (ids.size() != x.size())
        fail("DimensionMismatch", std::to_string(ids.size()) + " ids for " +
                                      std::to_string(x.size()) + " rows");
    if (params.iterations < params.exaggeration_iters + params.monotone_tail_iters)
        fail("BadIterationBudget", "iterations must cover exaggeration plus the monotone tail");

    const std::size_t n = x.size();
    auto cond = conditional_gaussians(x, params.perplexity);

    // Symmetrize: p_ij = (p_j|i + p_i|j) / 2n.
    std::vector<double> p(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            p[i * n + j] = (cond.p[i * n + j] + cond.p[j * n + i]) / (2.0 * static_cast<double>(n));
        }

    Rng rng(seed);
    std::vector<std::array<double, 2>> y(n);
    for (auto& point : y) {
        point[0] = rng.normal() * 1e-4;
        point[1] = rng.normal() * 1e-4;
    }

    std::vector<std::array<double, 2>> inc(n, {0.0, 0.0});
    std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});
    std::vector<double> w(n * n, 0.0), q(n * n, 0.0), grad(n * 2, 0.0);
    const std::size_t tail_start = params.iterations - params.monotone_tail_iters;
    const std::size_t momentum_switch = std::min<std::size_t>(250, tail_start);
    double tail_lr = params.learning_rate;

    Embedding2D out;
    out.ids = ids;
    out.perplexity = params.perplexity;
    out.seed = seed;
    out.kl_trace.reserve(params.iterations);

    for (std::size_t t = 0; t < params.iterations; ++t) {
        const double lift = t < params.exaggeration_iters ? params.exaggeration : 1.0;
        compute_q(y, w, q);
        for (std::size_t i = 0; i < n; ++i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double coeff = (lift * p[i * n + j] - q[i * n + j]) * w[i * n + j];
                gx += coeff * (y[i][0] - y[j][0]);
                gy += coeff * (y[i][1] - y[j][1]);
            }
            grad[i * 2] = 4.0 * gx;
            grad[i * 2 + 1] = 4.0 * gy;
        }

        if (t < tail_start) {
            const double momentum = t < momentum_switch ? 0.5 : 0.8;
            for (std::size_t i = 0; i < n; ++i)
                for (int d = 0; d < 2; ++d) {
                    double g = grad[i * 2 + d];
                    double& gain = gains[i][d];
                    gain = (g > 0.0) == (inc[i][d] > 0.0) ? std::max(gain * 0.8, 0.01) : gain + 0.2;
                    inc[i][d] = momentum * inc[i][d] - params.learning_rate * gain * g;
                    y[i][d] += inc[i][d];
                }
            center(y);
            compute_q(y, w, q);
            out.kl_trace.push_back(kl_divergence(p, q, n));
        } else {
            // Plain descent with backtracking: never accept an uphill step.
            double kl_before = kl_divergence(p, q, n);
            auto saved = y;
            double kl_after = kl_before;
            bool moved = false;
            for (int attempt = 0; attempt < 40; ++attempt) {
                for (std::size_t i = 0; i < n; ++i) {
                    y[i][0] = saved[i][0] - tail_lr * grad[i * 2];
                    y[i][1] = saved[i][1] - tail_lr * grad[i * 2 + 1];
                }
                compute_q(y, w, q);
                kl_after = kl_divergence(p, q, n);
                if (kl_after <= kl_before) { moved = true; break; }
                tail_lr /= 2.0;
            }
            if (!moved) {
                y = saved;
                kl_after = kl_before;
            }
            center(y);
            out.kl_trace.push_back(kl_after);
        }
    }

    out.points = y;
    out.final_kl = out.kl_trace.back();
    return out;
}

}  // namespace photoattr
