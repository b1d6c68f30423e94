#pragma once

#include <complex>
#include <vector>

#include "photoattr/image.hpp"

namespace photoattr {

constexpr int kGistSize = 256;      // working resolution
constexpr int kGistScales = 4;
constexpr int kGistOrientations = 8;
constexpr int kGistGrid = 4;        // 4x4 pooling grid
constexpr int kGistDim = kGistScales * kGistOrientations * kGistGrid * kGistGrid;  // 512

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

/// Holistic scene descriptor: grayscale, resize to 256x256, Gabor bank of
/// 4 scales x 8 orientations applied in the frequency domain, mean response
/// magnitude pooled over a 4x4 grid, globally L2-normalized. A constant image
/// yields the all-zero vector (the filters have no DC response and
/// normalization is skipped). Errors: EmptyImage.
std::vector<double> gist_descriptor(const Image& image);

/// The bank's transfer function for (scale, orientation), sampled on the
/// 256x256 FFT grid. Exposed for inspection and tests.
std::vector<double> gist_transfer_function(int scale, int orientation);

}  // namespace photoattr
