#include "photoattr/lab.hpp"

#include <algorithm>
#include <cmath>

#include "photoattr/errors.hpp"

namespace photoattr {

namespace {

double srgb_to_linear(std::uint8_t v) {
    const double c = v / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

int bin10(double value, double lo, double hi) {
    const int b = static_cast<int>(std::floor((value - lo) / (hi - lo) * 10.0));
    return std::clamp(b, 0, 9);
}

}  // namespace

std::array<double, 3> srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const double rl = srgb_to_linear(r);
    const double gl = srgb_to_linear(g);
    const double bl = srgb_to_linear(b);
    // sRGB D65 primaries
    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
    const double fx = lab_f(x / 0.95047);
    const double fy = lab_f(y / 1.0);
    const double fz = lab_f(z / 1.08883);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::vector<double> lab_histogram(const Image& image) {
    if (image.empty()) fail("EmptyImage", "lab_histogram on empty image");

    std::array<double, kLabHistogramDim> acc{};
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    const double w = 1.0 / (3.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        std::uint8_t r, g, b;
        if (image.channels == 3) {
            r = image.pixels[i * 3];
            g = image.pixels[i * 3 + 1];
            b = image.pixels[i * 3 + 2];
        } else {
            r = g = b = image.pixels[i];
        }
        const auto lab = srgb_to_lab(r, g, b);
        acc[bin10(lab[0], 0.0, 100.0)] += w;
        acc[10 + bin10(lab[1], -128.0, 128.0)] += w;
        acc[20 + bin10(lab[2], -128.0, 128.0)] += w;
    }
    return std::vector<double>(acc.begin(), acc.end());
}

}  // namespace photoattr
