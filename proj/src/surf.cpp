#include "photoattr/surf.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "photoattr/errors.hpp"

namespace photoattr {

namespace {

// filter side lengths; consecutive triples form the NMS scale neighborhoods
constexpr std::array<int, 6> kFilterSizes = {9, 15, 21, 27, 39, 51};

struct Integral {
    int width = 0;
    int height = 0;
    const double* data = nullptr;

    double box(int row, int col, int rows, int cols) const {
        const int r1 = std::min(row, height) - 1;
        const int c1 = std::min(col, width) - 1;
        const int r2 = std::min(row + rows, height) - 1;
        const int c2 = std::min(col + cols, width) - 1;
        const double a = (r1 >= 0 && c1 >= 0) ? data[static_cast<std::size_t>(r1) * width + c1] : 0.0;
        const double b = (r1 >= 0 && c2 >= 0) ? data[static_cast<std::size_t>(r1) * width + c2] : 0.0;
        const double c = (r2 >= 0 && c1 >= 0) ? data[static_cast<std::size_t>(r2) * width + c1] : 0.0;
        const double d = (r2 >= 0 && c2 >= 0) ? data[static_cast<std::size_t>(r2) * width + c2] : 0.0;
        return std::max(0.0, a - b - c + d);
    }

    double haar_x(int row, int col, int size) const {
        return box(row - size / 2, col, size, size / 2) -
               box(row - size / 2, col - size / 2, size, size / 2);
    }

    double haar_y(int row, int col, int size) const {
        return box(row, col - size / 2, size / 2, size) -
               box(row - size / 2, col - size / 2, size / 2, size);
    }
};

struct HessianPoint {
    double det = 0.0;
    bool lap_positive = false;
};

HessianPoint hessian_at(const Integral& ii, int r, int c, int size) {
    const int lobe = size / 3;
    const int border = (size - 1) / 2;
    const double inv = 1.0 / (static_cast<double>(size) * size);

    double dxx = ii.box(r - lobe + 1, c - border, 2 * lobe - 1, size) -
                 3.0 * ii.box(r - lobe + 1, c - lobe / 2, 2 * lobe - 1, lobe);
    double dyy = ii.box(r - border, c - lobe + 1, size, 2 * lobe - 1) -
                 3.0 * ii.box(r - lobe / 2, c - lobe + 1, lobe, 2 * lobe - 1);
    double dxy = ii.box(r - lobe, c + 1, lobe, lobe) + ii.box(r + 1, c - lobe, lobe, lobe) -
                 ii.box(r - lobe, c - lobe, lobe, lobe) - ii.box(r + 1, c + 1, lobe, lobe);
    dxx *= inv;
    dyy *= inv;
    dxy *= inv;
    return {dxx * dyy - 0.81 * dxy * dxy, dxx + dyy >= 0.0};
}

}  // namespace

std::vector<double> integral_image(const ImageF& gray) {
    const int w = gray.width, h = gray.height;
    std::vector<double> ii(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        double row_sum = 0.0;
        for (int x = 0; x < w; ++x) {
            row_sum += gray.at(x, y) / 255.0;
            ii[static_cast<std::size_t>(y) * w + x] =
                row_sum + (y > 0 ? ii[static_cast<std::size_t>(y - 1) * w + x] : 0.0);
        }
    }
    return ii;
}

DescriptorSet extract_descriptors(const Image& image, const SurfParams& params) {
    if (std::min(image.width, image.height) < 32) {
        fail("ImageTooSmall", "SURF needs min(width, height) >= 32, got " +
                                  std::to_string(image.width) + "x" + std::to_string(image.height));
    }

    const ImageF gray = to_gray(image);
    const std::vector<double> ii_data = integral_image(gray);
    const Integral ii{gray.width, gray.height, ii_data.data()};

    const int step = params.sampling_step;
    const int gw = (gray.width + step - 1) / step;
    const int gh = (gray.height + step - 1) / step;
    const int nscales = static_cast<int>(kFilterSizes.size());

    std::vector<std::vector<HessianPoint>> layers(nscales);
    for (int s = 0; s < nscales; ++s) {
        layers[s].resize(static_cast<std::size_t>(gw) * gh);
        for (int gy = 0; gy < gh; ++gy) {
            for (int gx = 0; gx < gw; ++gx) {
                layers[s][static_cast<std::size_t>(gy) * gw + gx] =
                    hessian_at(ii, gy * step, gx * step, kFilterSizes[s]);
            }
        }
    }

    // 3x3x3 non-maximum suppression over the middle scales
    std::vector<SurfKeypoint> keypoints;
    for (int s = 1; s + 1 < nscales; ++s) {
        const int margin_px = kFilterSizes[s + 1] / 2 + 1;
        const int g_lo = (margin_px + step - 1) / step;
        for (int gy = g_lo; gy < gh - g_lo; ++gy) {
            for (int gx = g_lo; gx < gw - g_lo; ++gx) {
                const double v = layers[s][static_cast<std::size_t>(gy) * gw + gx].det;
                if (v <= params.hessian_threshold) continue;
                bool is_max = true;
                for (int ds = -1; ds <= 1 && is_max; ++ds) {
                    for (int dy = -1; dy <= 1 && is_max; ++dy) {
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (ds == 0 && dy == 0 && dx == 0) continue;
                            if (layers[s + ds][static_cast<std::size_t>(gy + dy) * gw + gx + dx].det >= v) {
                                is_max = false;
                                break;
                            }
                        }
                    }
                }
                if (!is_max) continue;
                SurfKeypoint kp;
                kp.x = static_cast<float>(gx * step);
                kp.y = static_cast<float>(gy * step);
                kp.scale = 1.2f * kFilterSizes[s] / 9.0f;
                kp.response = static_cast<float>(v);
                kp.laplacian_positive = layers[s][static_cast<std::size_t>(gy) * gw + gx].lap_positive;
                keypoints.push_back(kp);
            }
        }
    }

    std::sort(keypoints.begin(), keypoints.end(), [](const SurfKeypoint& a, const SurfKeypoint& b) {
        if (a.response != b.response) return a.response > b.response;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    if (static_cast<int>(keypoints.size()) > params.max_keypoints) {
        keypoints.resize(params.max_keypoints);
    }

    DescriptorSet out;
    out.keypoints = std::move(keypoints);
    out.descriptors.resize(out.keypoints.size() * kSurfDescriptorDim);

    // upright descriptor: 20s x 20s window, 4x4 subregions of 5x5 samples
    for (std::size_t k = 0; k < out.keypoints.size(); ++k) {
        const auto& kp = out.keypoints[k];
        const double s = kp.scale;
        const int haar = std::max(2, 2 * static_cast<int>(std::lround(s)));
        const double sigma = 3.3 * s;
        float* desc = out.descriptors.data() + k * kSurfDescriptorDim;

        for (int sub_y = 0; sub_y < 4; ++sub_y) {
            for (int sub_x = 0; sub_x < 4; ++sub_x) {
                double sum_dx = 0.0, sum_adx = 0.0, sum_dy = 0.0, sum_ady = 0.0;
                for (int jy = 0; jy < 5; ++jy) {
                    for (int jx = 0; jx < 5; ++jx) {
                        const double off_x = ((sub_x * 5 + jx) - 10 + 0.5) * s;
                        const double off_y = ((sub_y * 5 + jy) - 10 + 0.5) * s;
                        const int px = static_cast<int>(std::lround(kp.x + off_x));
                        const int py = static_cast<int>(std::lround(kp.y + off_y));
                        const double g =
                            std::exp(-(off_x * off_x + off_y * off_y) / (2.0 * sigma * sigma));
                        const double dx = g * ii.haar_x(py, px, haar);
                        const double dy = g * ii.haar_y(py, px, haar);
                        sum_dx += dx;
                        sum_adx += std::abs(dx);
                        sum_dy += dy;
                        sum_ady += std::abs(dy);
                    }
                }
                const int base = (sub_y * 4 + sub_x) * 4;
                desc[base + 0] = static_cast<float>(sum_dx);
                desc[base + 1] = static_cast<float>(sum_adx);
                desc[base + 2] = static_cast<float>(sum_dy);
                desc[base + 3] = static_cast<float>(sum_ady);
            }
        }

        double norm2 = 0.0;
        for (int i = 0; i < kSurfDescriptorDim; ++i) norm2 += double(desc[i]) * desc[i];
        if (norm2 > 0.0) {
            const float inv = static_cast<float>(1.0 / std::sqrt(norm2));
            for (int i = 0; i < kSurfDescriptorDim; ++i) desc[i] *= inv;
        }
    }
    return out;
}

}  // namespace photoattr
