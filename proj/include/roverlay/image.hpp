#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "roverlay/roi_texture.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Linear-light RGB image, 3 floats per pixel.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<float> px;

    static RgbImage filled(int w, int h, const Color3f& c) {
        RgbImage img;
        img.width = w;
        img.height = h;
        img.px.resize(static_cast<std::size_t>(w) * h * 3);
        for (std::size_t i = 0; i < img.px.size(); i += 3) {
            img.px[i] = c.r;
            img.px[i + 1] = c.g;
            img.px[i + 2] = c.b;
        }
        return img;
    }

    float* at(int x, int y) { return px.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const float* at(int x, int y) const {
        return px.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

struct Gray16Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> px;
};

void write_ppm(const std::filesystem::path& path, const RgbImage& img);

void write_png_rgb8(const std::filesystem::path& path, const RgbImage& img);
void write_png_rgba8(const std::filesystem::path& path, const RgbaImage8& img);
void write_png_gray16(const std::filesystem::path& path, const Gray16Image& img);
Gray16Image read_png_gray16(const std::filesystem::path& path);

}  // namespace roverlay
