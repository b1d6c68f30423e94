#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace photoattr {

/// 8-bit raster, interleaved; channels is 1 (gray) or 3 (RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels;

    bool empty() const { return width <= 0 || height <= 0; }
    std::uint8_t at(int x, int y, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Single-channel float raster, values in [0, 255].
struct ImageF {
    int width = 0;
    int height = 0;
    std::vector<float> pixels;

    float at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

Image make_image(int width, int height, int channels, std::uint8_t fill = 0);

/// Reads PNG, PPM (P6) or PGM (P5) by content sniffing. Returns an 8-bit
/// gray or RGB image. Errors: IoFailure, UnsupportedImage.
Image load_image(const std::string& path);

/// Writes by extension: .png, .ppm (requires RGB), .pgm (requires gray).
void save_image(const Image& img, const std::string& path);

/// Rec. 601 luma (0.299/0.587/0.114).
ImageF to_gray(const Image& img);

/// Area-average when shrinking, bilinear when enlarging.
ImageF resize_gray(const ImageF& img, int out_w, int out_h);
Image resize_bilinear(const Image& img, int out_w, int out_h);

}  // namespace photoattr
