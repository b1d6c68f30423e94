#include "photoattr/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <png.h>

#include "photoattr/errors.hpp"

namespace photoattr {

Image make_image(int width, int height, int channels, std::uint8_t fill) {
    Image img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

int pnm_next_int(std::ifstream& in, const std::string& path) {
    // skips whitespace and '#' comments per the PNM grammar
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        } else {
            c = in.get();
        }
    }
    if (c == EOF || !std::isdigit(c)) fail("UnsupportedImage", "bad PNM header: " + path);
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = in.get();
    }
    return value;
}

Image load_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoFailure", "cannot open image: " + path);
    char p = 0, kind = 0;
    in.get(p);
    in.get(kind);
    if (p != 'P' || (kind != '5' && kind != '6')) {
        fail("UnsupportedImage", "only binary PGM (P5) / PPM (P6) supported: " + path);
    }
    const int w = pnm_next_int(in, path);
    const int h = pnm_next_int(in, path);
    const int maxval = pnm_next_int(in, path);
    if (w < 1 || h < 1 || maxval != 255) {
        fail("UnsupportedImage", "unsupported PNM geometry or maxval: " + path);
    }
    Image img = make_image(w, h, kind == '6' ? 3 : 1);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        fail("UnsupportedImage", "truncated PNM payload: " + path);
    }
    return img;
}

void save_pnm(const Image& img, const std::string& path, bool color) {
    if (color && img.channels != 3) fail("UnsupportedImage", "PPM requires an RGB image");
    if (!color && img.channels != 1) fail("UnsupportedImage", "PGM requires a gray image");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoFailure", "cannot open for writing: " + path);
    out << (color ? "P6" : "P5") << "\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) fail("IoFailure", "write failed: " + path);
}

Image load_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("IoFailure", "cannot open image: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("IoFailure", "libpng init failed");
    }
    std::vector<png_bytep> row_ptrs;
    Image img;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("UnsupportedImage", "PNG decode failed: " + path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = 0, h = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("UnsupportedImage", "PNG with unsupported channel count: " + path);
    }
    img = make_image(static_cast<int>(w), static_cast<int>(h), channels);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) {
        row_ptrs[y] = img.pixels.data() + static_cast<std::size_t>(y) * w * channels;
    }
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const Image& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("IoFailure", "cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail("IoFailure", "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("IoFailure", "PNG encode failed: " + path);
    }
    png_init_io(png, fp.get());
    const int color_type = img.channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(img.pixels.data() +
                                                 static_cast<std::size_t>(y) * img.width *
                                                     img.channels));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Image load_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) fail("IoFailure", "cannot open image: " + path);
    unsigned char sig[8] = {0};
    probe.read(reinterpret_cast<char*>(sig), 8);
    probe.close();
    if (png_sig_cmp(sig, 0, 8) == 0) return load_png(path);
    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) return load_pnm(path);
    fail("UnsupportedImage", "unrecognized image format: " + path);
}

void save_image(const Image& img, const std::string& path) {
    if (img.empty()) fail("EmptyImage", "refusing to write an empty image");
    if (has_suffix(path, ".png")) {
        save_png(img, path);
    } else if (has_suffix(path, ".ppm")) {
        save_pnm(img, path, true);
    } else if (has_suffix(path, ".pgm")) {
        save_pnm(img, path, false);
    } else {
        fail("UnsupportedImage", "unknown output extension: " + path);
    }
}

ImageF to_gray(const Image& img) {
    ImageF out;
    out.width = img.width;
    out.height = img.height;
    out.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
    const std::size_t n = out.pixels.size();
    if (img.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) out.pixels[i] = static_cast<float>(img.pixels[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint8_t* p = img.pixels.data() + i * 3;
            out.pixels[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
        }
    }
    return out;
}

ImageF resize_gray(const ImageF& img, int out_w, int out_h) {
    ImageF out;
    out.width = out_w;
    out.height = out_h;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);
    if (img.width == out_w && img.height == out_h) {
        out.pixels = img.pixels;
        return out;
    }
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    const bool shrink = sx > 1.0 || sy > 1.0;
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            if (shrink) {
                // box average over the source footprint of this output pixel
                const double x0 = ox * sx, x1 = (ox + 1) * sx;
                const double y0 = oy * sy, y1 = (oy + 1) * sy;
                const int ix0 = static_cast<int>(std::floor(x0));
                const int ix1 = std::min(img.width, static_cast<int>(std::ceil(x1)));
                const int iy0 = static_cast<int>(std::floor(y0));
                const int iy1 = std::min(img.height, static_cast<int>(std::ceil(y1)));
                double acc = 0.0, wsum = 0.0;
                for (int y = iy0; y < iy1; ++y) {
                    const double wy = std::min<double>(y + 1, y1) - std::max<double>(y, y0);
                    for (int x = ix0; x < ix1; ++x) {
                        const double wx = std::min<double>(x + 1, x1) - std::max<double>(x, x0);
                        acc += wx * wy * img.at(x, y);
                        wsum += wx * wy;
                    }
                }
                out.at(ox, oy) = static_cast<float>(acc / wsum);
            } else {
                const double fx = (ox + 0.5) * sx - 0.5;
                const double fy = (oy + 0.5) * sy - 0.5;
                const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, img.width - 1);
                const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, img.height - 1);
                const int x1 = std::min(x0 + 1, img.width - 1);
                const int y1 = std::min(y0 + 1, img.height - 1);
                const double ax = std::clamp(fx - x0, 0.0, 1.0);
                const double ay = std::clamp(fy - y0, 0.0, 1.0);
                const double top = img.at(x0, y0) * (1 - ax) + img.at(x1, y0) * ax;
                const double bot = img.at(x0, y1) * (1 - ax) + img.at(x1, y1) * ax;
                out.at(ox, oy) = static_cast<float>(top * (1 - ay) + bot * ay);
            }
        }
    }
    return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    Image out = make_image(out_w, out_h, img.channels);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        for (int ox = 0; ox < out_w; ++ox) {
            const double fx = (ox + 0.5) * sx - 0.5;
            const double fy = (oy + 0.5) * sy - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, img.width - 1);
            const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, img.height - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            const double ax = std::clamp(fx - x0, 0.0, 1.0);
            const double ay = std::clamp(fy - y0, 0.0, 1.0);
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(x0, y0, c) * (1 - ax) + img.at(x1, y0, c) * ax;
                const double bot = img.at(x0, y1, c) * (1 - ax) + img.at(x1, y1, c) * ax;
                const double v = top * (1 - ay) + bot * ay;
                out.at(ox, oy, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

}  // namespace photoattr
