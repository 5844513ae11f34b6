#include "roverlay/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "roverlay/errors.hpp"
#include "roverlay/polygon.hpp"
#include "roverlay/rng.hpp"

namespace roverlay {

std::optional<Technique> parse_technique(const std::string& name) {
    if (name == "csg") return Technique::csg;
    if (name == "decal") return Technique::decal;
    if (name == "pps") return Technique::pps;
    return std::nullopt;
}

const char* technique_name(Technique t) {
    switch (t) {
        case Technique::csg: return "csg";
        case Technique::decal: return "decal";
        case Technique::pps: return "pps";
    }
    return "?";
}

namespace {

const Color3f kPalette[8] = {
    {0.90f, 0.20f, 0.15f}, {0.95f, 0.60f, 0.10f}, {0.95f, 0.85f, 0.20f},
    {0.30f, 0.75f, 0.25f}, {0.15f, 0.65f, 0.80f}, {0.25f, 0.35f, 0.90f},
    {0.65f, 0.25f, 0.85f}, {0.90f, 0.35f, 0.60f},
};

// Star polygon around a center: angularly monotone, so never self-intersecting.
RoiPolygon random_star_polygon(SplitMix& rng, const Vec2& center, double radius, int vertices,
                               std::uint32_t region_id) {
    RoiPolygon poly;
    poly.region_id = region_id;
    poly.exterior.reserve(static_cast<std::size_t>(vertices));
    const double step = 2.0 * 3.14159265358979323846 / vertices;
    for (int i = 0; i < vertices; ++i) {
        const double angle = step * (i + 0.42 * (rng.next_double() - 0.5));
        const double r = radius * (0.55 + 0.65 * rng.next_double());
        poly.exterior.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
    }
    return poly;  // CCW by construction (angles increase)
}

}  // namespace

BenchScene generate_bench_scene(std::uint64_t seed, int n_overlays,
                                const BenchSceneParams& params) {
    if (n_overlays < 0) throw Error("overlay count must be non-negative");
    BenchScene scene;
    scene.transform = WorldCrsTransform::identity();

    const double extent = params.terrain_extent;
    const double cell = extent / (params.terrain_grid - 1);
    scene.terrain = procedural_heightfield(mix64(seed), params.terrain_grid, params.terrain_grid,
                                           cell, params.terrain_amplitude);

    SplitMix rng(mix64(seed ^ 0xC0FFEEull) + static_cast<std::uint64_t>(n_overlays));
    for (int k = 0; k < n_overlays; ++k) {
        const Vec2 center{rng.uniform(0.2 * extent, 0.8 * extent),
                          rng.uniform(0.2 * extent, 0.8 * extent)};
        const double radius = params.footprint_radius * rng.uniform(0.8, 1.2);
        RoiPolygon poly = random_star_polygon(rng, center, radius, params.polygon_vertices,
                                              static_cast<std::uint32_t>(k + 1));
        for (const Vec2& p : poly.exterior) scene.rois.crs_bounds.expand(p);
        scene.rois.regions.push_back(std::move(poly));
    }

    for (std::uint32_t id = 1; id <= static_cast<std::uint32_t>(n_overlays); ++id) {
        OverlayStyle style = OverlayStyle::make(Pattern::fill, Density::low);
        style.color = kPalette[(id - 1) % 8];
        style.opacity = 0.45;
        scene.styles[id] = style;
    }

    const double max_h = std::max(scene.terrain.max_abs_height(), 1e-6);
    const double half_height = params.half_height_factor * max_h;
    for (const RoiPolygon& poly : scene.rois.regions)
        scene.meshes.push_back(extrude_polygon(poly, scene.transform, half_height));

    CrsRect window;
    window.expand({0.0, 0.0});
    window.expand({extent, extent});
    if (n_overlays > 0) {
        scene.roi_texture = rasterize_roi(scene.rois, window, params.roi_texture_size,
                                          params.roi_texture_size);
        for (const RoiPolygon& poly : scene.rois.regions) {
            CrsRect box;
            for (const Vec2& p : poly.exterior) box.expand(p);
            const double pad_x = 0.05 * box.width();
            const double pad_y = 0.05 * box.height();
            box.expand({box.min.x - pad_x, box.min.y - pad_y});
            box.expand({box.max.x + pad_x, box.max.y + pad_y});
            RoiSet single;
            single.regions.push_back(poly);
            single.crs_bounds = box;
            const RoiTexture roi =
                rasterize_roi(single, box, params.decal_texture_size, params.decal_texture_size);
            StyleMap one_style{{poly.region_id, scene.styles.at(poly.region_id)}};
            scene.decal_textures.push_back(make_decal_texture(roi, bake_style_texture(roi, one_style)));
            scene.decal_projectors.push_back(
                Projector::top_down_ortho(box, 2.0 * half_height, 4.0 * half_height));
        }
    }

    const double elev = params.camera_elevation_deg * 3.14159265358979323846 / 180.0;
    const Vec3 center{extent * 0.5, 0.0, extent * 0.5};
    const double dist = extent * 1.05;
    const Vec3 position = center + Vec3{0.0, dist * std::sin(elev), -dist * std::cos(elev)};
    scene.camera = Camera::look_at(position, center, params.camera_vfov_deg, 1.0);
    scene.camera.near_clip = 0.5;
    scene.camera.far_clip = 1e5;
    return scene;
}

void merge_mask(OverlayMask& accum, const OverlayMask& layer) {
    if (accum.width != layer.width || accum.height != layer.height)
        throw DimensionMismatch("mask dimensions differ");
    const bool rgba = layer.has_rgba();
    if (rgba && !accum.has_rgba()) accum.rgba.assign(accum.ids.size() * 4, 0);
    for (std::size_t i = 0; i < layer.ids.size(); ++i) {
        if (layer.ids[i] == 0) continue;
        accum.ids[i] = layer.ids[i];
        if (rgba)
            for (int c = 0; c < 4; ++c) accum.rgba[4 * i + c] = layer.rgba[4 * i + c];
    }
}

RgbImage render_overlay_phase(const BenchScene& scene, const GBuffer& g, const RgbImage& base,
                              Technique technique, int threads, PpsStats* stats,
                              OverlayMask* mask_out) {
    OverlayMask mask;
    mask.width = g.width;
    mask.height = g.height;
    mask.ids.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    if (!scene.rois.regions.empty()) {
        switch (technique) {
            case Technique::csg:
                mask = csg_mask(g, scene.meshes, scene.camera, threads);
                break;
            case Technique::decal: {
                mask.rgba.assign(mask.ids.size() * 4, 0);
                for (std::size_t k = 0; k < scene.decal_projectors.size(); ++k) {
                    const OverlayMask layer = apply_decal(g, scene.decal_projectors[k],
                                                          scene.decal_textures[k], {}, threads);
                    merge_mask(mask, layer);
                }
                break;
            }
            case Technique::pps:
                mask = pps_lookup(g, scene.transform, scene.roi_texture, stats, threads);
                break;
        }
    }
    RgbImage out = composite(base, mask, scene.styles, scene.policy, true, nullptr, threads);
    if (mask_out) *mask_out = std::move(mask);
    return out;
}

BenchReport run_bench(const BenchOptions& opt) {
    if (opt.frames_per_cell < 10) throw Error("frames_per_cell must be at least 10");
    BenchReport report;
    report.env = {opt.resolution, opt.resolution, opt.seed,
                  opt.threads,    opt.frames_per_cell, opt.warmup_frames};

    using clock = std::chrono::steady_clock;
    for (int count : opt.counts) {
        const BenchScene scene = generate_bench_scene(opt.seed, count, opt.scene);
        const GBuffer g = rasterize_scene(scene.terrain, {}, scene.camera, opt.resolution,
                                          opt.resolution, {0.35f, 0.42f, 0.25f}, opt.threads);
        const RgbImage base = shade_base(g, scene.sun, opt.threads);
        for (Technique technique : opt.techniques) {
            for (int frame = -opt.warmup_frames; frame < opt.frames_per_cell; ++frame) {
                PpsStats stats;
                const auto t0 = clock::now();
                const RgbImage img = render_overlay_phase(scene, g, base, technique, opt.threads,
                                                          &stats, nullptr);
                const auto t1 = clock::now();
                (void)img;
                if (frame < 0) continue;
                const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                report.rows.push_back({technique, count, frame, ms});
                if (technique == Technique::pps && frame == 0 && count > 0)
                    report.pps_fetches.emplace_back(count, stats.texture_fetches);
            }
        }
    }

    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const BenchRow& a, const BenchRow& b) {
                         if (a.technique != b.technique)
                             return static_cast<int>(a.technique) < static_cast<int>(b.technique);
                         if (a.overlays != b.overlays) return a.overlays < b.overlays;
                         return a.frame < b.frame;
                     });
    return report;
}

double median(std::vector<double> values) {
    if (values.empty()) throw InsufficientData("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::map<int, double> median_ms_per_count(const BenchReport& report, Technique technique) {
    std::map<int, std::vector<double>> samples;
    for (const BenchRow& row : report.rows)
        if (row.technique == technique) samples[row.overlays].push_back(row.ms);
    std::map<int, double> medians;
    for (auto& [count, values] : samples) medians[count] = median(std::move(values));
    return medians;
}

std::vector<SlopeFit> fit_slopes(const BenchReport& report) {
    std::vector<Technique> techniques;
    for (const BenchRow& row : report.rows)
        if (std::find(techniques.begin(), techniques.end(), row.technique) == techniques.end())
            techniques.push_back(row.technique);

    std::vector<SlopeFit> fits;
    for (Technique technique : techniques) {
        const std::map<int, double> medians = median_ms_per_count(report, technique);
        if (medians.size() < 3)
            throw InsufficientData("slope fit needs at least 3 distinct overlay counts");
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(medians.size());
        for (const auto& [count, ms] : medians) {
            sx += count;
            sy += ms;
            sxx += double(count) * count;
            sxy += count * ms;
        }
        const double denom = n * sxx - sx * sx;
        SlopeFit fit;
        fit.technique = technique;
        fit.slope_ms_per_overlay = (n * sxy - sx * sy) / denom;
        fit.intercept_ms = (sy - fit.slope_ms_per_overlay * sx) / n;
        double ss = 0.0;
        for (const auto& [count, ms] : medians) {
            const double r = ms - (fit.intercept_ms + fit.slope_ms_per_overlay * count);
            ss += r * r;
        }
        fit.residual_rms = std::sqrt(ss / n);
        fits.push_back(fit);
    }
    return fits;
}

double mask_iou(const OverlayMask& a, const OverlayMask& b) {
    if (a.width != b.width || a.height != b.height)
        throw DimensionMismatch("mask dimensions differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.ids.size(); ++i) {
        const bool in_a = a.ids[i] > 0;
        const bool in_b = b.ids[i] > 0;
        inter += in_a && in_b;
        uni += in_a || in_b;
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
    out << "technique,overlays,frame,ms\n";
    char line[96];
    for (const BenchRow& row : report.rows) {
        std::snprintf(line, sizeof line, "%s,%d,%d,%.6f\n", technique_name(row.technique),
                      row.overlays, row.frame, row.ms);
        out << line;
    }
}

}  // namespace roverlay
