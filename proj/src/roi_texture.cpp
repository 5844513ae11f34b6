#include "roverlay/roi_texture.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "roverlay/errors.hpp"
#include "roverlay/polygon.hpp"

namespace roverlay {

namespace {

constexpr double kFar = 1e20;

void collect_row_crossings(const RoiPolygon& poly, double cy, std::vector<double>* crossings) {
    crossings->clear();
    const auto ring_crossings = [&](const std::vector<Vec2>& ring) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2& a = ring[j];
            const Vec2& b = ring[i];
            if ((a.y <= cy) != (b.y <= cy))
                crossings->push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
        }
    };
    ring_crossings(poly.exterior);
    for (const auto& hole : poly.holes) ring_crossings(hole);
    std::sort(crossings->begin(), crossings->end());
}

// 1D squared-distance lower envelope of parabolas.
void dt_1d(const std::vector<double>& f, std::size_t n, std::vector<double>* d,
           std::vector<int>* v, std::vector<double>* z) {
    int k = 0;
    (*v)[0] = 0;
    (*z)[0] = -kFar;
    (*z)[1] = kFar;
    for (int q = 1; q < static_cast<int>(n); ++q) {
        double s = ((f[q] + double(q) * q) - (f[(*v)[k]] + double((*v)[k]) * (*v)[k])) /
                   (2.0 * q - 2.0 * (*v)[k]);
        while (s <= (*z)[k]) {
            --k;
            s = ((f[q] + double(q) * q) - (f[(*v)[k]] + double((*v)[k]) * (*v)[k])) /
                (2.0 * q - 2.0 * (*v)[k]);
        }
        ++k;
        (*v)[k] = q;
        (*z)[k] = s;
        (*z)[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < static_cast<int>(n); ++q) {
        while ((*z)[k + 1] < q) ++k;
        const double dq = q - (*v)[k];
        (*d)[q] = dq * dq + f[(*v)[k]];
    }
}

}  // namespace

std::vector<double> distance_transform_squared(const std::vector<std::uint8_t>& seed, int width,
                                               int height) {
    std::vector<double> grid(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = seed[i] ? 0.0 : kFar;

    const std::size_t n = static_cast<std::size_t>(std::max(width, height));
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    for (int y = 0; y < height; ++y) {
        double* row = grid.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) f[x] = row[x];
        dt_1d(f, static_cast<std::size_t>(width), &d, &v, &z);
        for (int x = 0; x < width; ++x) row[x] = d[x];
    }
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) f[y] = grid[static_cast<std::size_t>(y) * width + x];
        dt_1d(f, static_cast<std::size_t>(height), &d, &v, &z);
        for (int y = 0; y < height; ++y) grid[static_cast<std::size_t>(y) * width + x] = d[y];
    }
    return grid;
}

RoiTexture rasterize_roi(const RoiSet& set, const CrsRect& crs_window, int width, int height) {
    if (width < 1 || height < 1) throw Error("texture resolution must be at least 1x1");
    if (!(crs_window.width() > 0.0) || !(crs_window.height() > 0.0))
        throw Error("CRS window is degenerate");

    RoiTexture tex;
    tex.width = width;
    tex.height = height;
    tex.crs_window = crs_window;
    tex.ids.assign(static_cast<std::size_t>(width) * height, 0);

    const double du = crs_window.width() / width;
    const double dv = crs_window.height() / height;
    const auto center_x = [&](int j) { return crs_window.min.x + (j + 0.5) * du; };

    std::vector<double> crossings;
    for (const RoiPolygon& poly : set.regions) {
        for (int y = 0; y < height; ++y) {
            const double cy = crs_window.min.y + (y + 0.5) * dv;
            collect_row_crossings(poly, cy, &crossings);
            for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
                const double x0 = crossings[k];
                const double x1 = crossings[k + 1];
                // First pixel center >= x0, adjusted so the fill agrees
                // bit-for-bit with point_in_polygon's `q.x < crossing` test.
                int j0 = static_cast<int>(std::ceil((x0 - crs_window.min.x) / du - 0.5));
                while (j0 > 0 && center_x(j0 - 1) >= x0) --j0;
                while (j0 < width && center_x(j0) < x0) ++j0;
                int j1 = static_cast<int>(std::ceil((x1 - crs_window.min.x) / du - 0.5));
                while (j1 > 0 && center_x(j1 - 1) >= x1) --j1;
                while (j1 < width && center_x(j1) < x1) ++j1;
                j0 = std::max(j0, 0);
                j1 = std::min(j1, width);
                std::uint32_t* row = tex.ids.data() + static_cast<std::size_t>(y) * width;
                for (int j = j0; j < j1; ++j) row[j] = poly.region_id;
            }
        }
    }

    // Signed distance to the nearest differently-labeled pixel, shifted half
    // a pixel so the zero level falls between opposite-membership centers.
    tex.dist.assign(tex.ids.size(), 0.0);
    std::set<std::uint32_t> labels(tex.ids.begin(), tex.ids.end());
    const double diagonal = std::sqrt(double(width) * width + double(height) * height);
    std::vector<std::uint8_t> seed(tex.ids.size());
    for (std::uint32_t label : labels) {
        for (std::size_t i = 0; i < tex.ids.size(); ++i) seed[i] = tex.ids[i] != label;
        const std::vector<double> sq = distance_transform_squared(seed, width, height);
        for (std::size_t i = 0; i < tex.ids.size(); ++i) {
            if (tex.ids[i] != label) continue;
            const double raw = std::min(std::sqrt(sq[i]) - 0.5, diagonal);
            tex.dist[i] = label > 0 ? -raw : raw;
        }
    }
    return tex;
}

RgbaImage8 bake_style_texture(const RoiTexture& roi, const StyleMap& styles) {
    std::set<std::uint32_t> present(roi.ids.begin(), roi.ids.end());
    present.erase(0);
    for (std::uint32_t id : present)
        if (!styles.count(id)) throw MissingStyle("no style for region id " + std::to_string(id));

    StyleMap scaled;
    for (const auto& [id, style] : styles) scaled[id] = style.scaled_for_bake(roi.width);

    RgbaImage8 img;
    img.width = roi.width;
    img.height = roi.height;
    img.px.assign(static_cast<std::size_t>(roi.width) * roi.height * 4, 0);
    for (int y = 0; y < roi.height; ++y) {
        for (int x = 0; x < roi.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * roi.width + x;
            const std::uint32_t id = roi.ids[i];
            if (id == 0) continue;
            const OverlayStyle& style = scaled.at(id);
            const bool covered = eval_pattern(style, {x + 0.5, y + 0.5}, roi.dist[i]);
            const double alpha = covered ? style.opacity : 0.0;
            std::uint8_t* out = img.px.data() + 4 * i;
            out[0] = static_cast<std::uint8_t>(std::lround(std::clamp(style.color.r, 0.0f, 1.0f) * 255.0));
            out[1] = static_cast<std::uint8_t>(std::lround(std::clamp(style.color.g, 0.0f, 1.0f) * 255.0));
            out[2] = static_cast<std::uint8_t>(std::lround(std::clamp(style.color.b, 0.0f, 1.0f) * 255.0));
            out[3] = static_cast<std::uint8_t>(std::lround(std::clamp(alpha, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

}  // namespace roverlay
