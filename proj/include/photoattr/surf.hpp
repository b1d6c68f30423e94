#pragma once

#include <string>
#include <vector>

#include "photoattr/image.hpp"

namespace photoattr {

constexpr int kSurfDescriptorDim = 64;

struct SurfKeypoint {
    float x = 0.0f;
    float y = 0.0f;
    float scale = 0.0f;     // 1.2 * filter_size / 9
    float response = 0.0f;  // Hessian determinant
    bool laplacian_positive = false;
};

/// Keypoints with their 64-d descriptors (row-major, keypoints.size() x 64,
/// each row L2-normalized to unit length). Keypoints are sorted by response
/// strength, strongest first.
struct DescriptorSet {
    std::string photo_id;
    std::vector<SurfKeypoint> keypoints;
    std::vector<float> descriptors;

    std::size_t size() const { return keypoints.size(); }
};

struct SurfParams {
    double hessian_threshold = 4e-4;  // on [0,1]-scaled pixels
    int sampling_step = 2;
    int max_keypoints = 1000;         // keep the strongest
};

/// Integral image over pixels/255; entry (x, y) holds the sum of the
/// inclusive rectangle [0..x] x [0..y].
std::vector<double> integral_image(const ImageF& gray);

/// Box-filter Hessian interest points plus upright 64-d descriptors
/// (4x4 subregions of Haar responses: sum dx, sum |dx|, sum dy, sum |dy|).
/// Requires min(width, height) >= 32 (ImageTooSmall); a featureless image
/// yields an empty set.
DescriptorSet extract_descriptors(const Image& image, const SurfParams& params = {});

}  // namespace photoattr
