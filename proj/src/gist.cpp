#include "photoattr/gist.hpp"

#include <cmath>
#include <mutex>

#include "photoattr/errors.hpp"

namespace photoattr {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Log-polar Gabor transfer function: radial Gaussian around the scale's
// center frequency, angular Gaussian around the orientation, one-sided so the
// inverse transform is the analytic (quadrature) response.
std::vector<double> make_transfer(int scale, int orientation) {
    const int n = kGistSize;
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    const double center_freq = 0.3 / std::pow(1.85, scale);  // cycles per pixel
    const double theta = kPi / kGistOrientations * orientation;
    for (int ky = 0; ky < n; ++ky) {
        const double fy = (ky <= n / 2 ? ky : ky - n) / static_cast<double>(n);
        for (int kx = 0; kx < n; ++kx) {
            const double fx = (kx <= n / 2 ? kx : kx - n) / static_cast<double>(n);
            const double r = std::hypot(fx, fy);
            double t = std::atan2(fy, fx) + theta;
            while (t > kPi) t -= 2.0 * kPi;
            while (t < -kPi) t += 2.0 * kPi;
            const double radial = std::exp(-3.5 * std::pow(r / center_freq - 1.0, 2.0));
            const double angular = std::exp(-2.0 * kPi * t * t);
            g[static_cast<std::size_t>(ky) * n + kx] = radial * angular;
        }
    }
    g[0] = 0.0;  // no DC response
    return g;
}

const std::vector<std::vector<double>>& bank() {
    static std::vector<std::vector<double>> filters;
    static std::once_flag once;
    std::call_once(once, [] {
        filters.reserve(kGistScales * kGistOrientations);
        for (int s = 0; s < kGistScales; ++s) {
            for (int o = 0; o < kGistOrientations; ++o) {
                filters.push_back(make_transfer(s, o));
            }
        }
    });
    return filters;
}

void fft2d(std::vector<std::complex<double>>& a, int n, bool inverse) {
    std::vector<std::complex<double>> line(n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) line[x] = a[static_cast<std::size_t>(y) * n + x];
        fft_inplace(line, inverse);
        for (int x = 0; x < n; ++x) a[static_cast<std::size_t>(y) * n + x] = line[x];
    }
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) line[y] = a[static_cast<std::size_t>(y) * n + x];
        fft_inplace(line, inverse);
        for (int y = 0; y < n; ++y) a[static_cast<std::size_t>(y) * n + x] = line[y];
    }
}

}  // namespace

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

std::vector<double> gist_transfer_function(int scale, int orientation) {
    return make_transfer(scale, orientation);
}

std::vector<double> gist_descriptor(const Image& image) {
    if (image.empty()) fail("EmptyImage", "gist_descriptor on empty image");

    const ImageF gray = resize_gray(to_gray(image), kGistSize, kGistSize);
    const int n = kGistSize;

    std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] = gray.pixels[i];
    fft2d(spectrum, n, false);

    std::vector<double> out;
    out.reserve(kGistDim);
    const int cell = n / kGistGrid;
    std::vector<std::complex<double>> resp(spectrum.size());
    for (const auto& g : bank()) {
        for (std::size_t i = 0; i < resp.size(); ++i) resp[i] = spectrum[i] * g[i];
        fft2d(resp, n, true);
        for (int gy = 0; gy < kGistGrid; ++gy) {
            for (int gx = 0; gx < kGistGrid; ++gx) {
                double acc = 0.0;
                for (int y = gy * cell; y < (gy + 1) * cell; ++y) {
                    for (int x = gx * cell; x < (gx + 1) * cell; ++x) {
                        acc += std::abs(resp[static_cast<std::size_t>(y) * n + x]);
                    }
                }
                out.push_back(acc / (cell * cell));
            }
        }
    }

    double norm2 = 0.0;
    for (double v : out) norm2 += v * v;
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : out) v *= inv;
    }
    return out;
}

}  // namespace photoattr
