#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "photoattr/image.hpp"

namespace photoattr {

constexpr int kLabHistogramDim = 30;

/// sRGB (8-bit, D65) -> CIE L*a*b*. L in [0,100], a/b roughly in [-128,128).
std::array<double, 3> srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// 30-d color histogram: 10 bins per channel (L over [0,100], a and b over
/// [-128,128)), channels concatenated, L1-normalized. Each pixel contributes
/// 1/(3*pixels) per channel. Errors: EmptyImage.
std::vector<double> lab_histogram(const Image& image);

}  // namespace photoattr
