#pragma once

#include <cstdint>
#include <vector>

#include "roverlay/geojson.hpp"
#include "roverlay/style.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Rasterized region-id grid plus signed boundary distance, both sampled at
// pixel centers over an axis-aligned CRS window. Row 0 covers the window's
// minimum v edge. dist is measured in texture pixels against the nearest
// pixel of a different id, offset half a pixel so the zero level sits on the
// membership boundary; negative inside (id > 0).
struct RoiTexture {
    int width = 0;
    int height = 0;
    CrsRect crs_window;
    std::vector<std::uint32_t> ids;
    std::vector<double> dist;

    Vec2 pixel_center_crs(int x, int y) const {
        return {crs_window.min.x + (x + 0.5) * crs_window.width() / width,
                crs_window.min.y + (y + 0.5) * crs_window.height() / height};
    }
    std::uint32_t id_at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
    double dist_at(int x, int y) const { return dist[static_cast<std::size_t>(y) * width + x]; }
};

// Scanline even-odd rasterization at pixel centers, half-open edge ownership
// matching point_in_polygon. Overlaps resolve to the later region in the set.
RoiTexture rasterize_roi(const RoiSet& set, const CrsRect& crs_window, int width, int height);

// Exact squared Euclidean distance transform (row/column parabola passes).
// seed[i] true marks distance-zero pixels; returns squared distances.
std::vector<double> distance_transform_squared(const std::vector<std::uint8_t>& seed, int width,
                                               int height);

struct RgbaImage8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> px;  // RGBA interleaved

    const std::uint8_t* at(int x, int y) const {
        return px.data() + 4 * (static_cast<std::size_t>(y) * width + x);
    }
};

// Renders pattern, outline and opacity into an RGBA raster aligned with the
// RoiTexture grid. Stripe/dot geometry is scaled from the 1920-reference to
// the texture width; alpha is opacity times binary pattern coverage.
RgbaImage8 bake_style_texture(const RoiTexture& roi, const StyleMap& styles);

}  // namespace roverlay
