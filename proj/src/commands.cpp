#include "roverlay/commands.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "roverlay/composite.hpp"
#include "roverlay/errors.hpp"
#include "roverlay/image.hpp"
#include "roverlay/polygon.hpp"

namespace roverlay {

using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0, clock_type::time_point t1) {
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

Gray16Image ids_to_gray16(const RoiTexture& roi) {
    Gray16Image img;
    img.width = roi.width;
    img.height = roi.height;
    img.px.resize(roi.ids.size());
    for (std::size_t i = 0; i < roi.ids.size(); ++i) {
        if (roi.ids[i] > 0xFFFF)
            throw Error("region id " + std::to_string(roi.ids[i]) +
                        " does not fit a 16-bit id texture");
        img.px[i] = static_cast<std::uint16_t>(roi.ids[i]);
    }
    return img;
}

StyleMap default_styles_for(const RoiSet& set) {
    static const Color3f palette[8] = {
        {0.90f, 0.20f, 0.15f}, {0.95f, 0.60f, 0.10f}, {0.95f, 0.85f, 0.20f},
        {0.30f, 0.75f, 0.25f}, {0.15f, 0.65f, 0.80f}, {0.25f, 0.35f, 0.90f},
        {0.65f, 0.25f, 0.85f}, {0.90f, 0.35f, 0.60f},
    };
    StyleMap styles;
    std::size_t index = 0;
    for (const RoiPolygon& poly : set.regions) {
        OverlayStyle style = OverlayStyle::make(Pattern::fill, Density::low);
        style.color = palette[index++ % 8];
        styles[poly.region_id] = style;
    }
    return styles;
}

}  // namespace

int cmd_bake(const BakeOptions& opt, std::ostream& out) {
    if (!std::filesystem::exists(opt.geojson))
        throw ConfigError("no such input: " + opt.geojson.string());
    if (opt.resolution < 1) throw ConfigError("resolution must be positive");
    if (!(opt.half_height > 0.0)) throw ConfigError("half_height must be positive");
    const WorldCrsTransform transform = WorldCrsTransform::from_coeffs(opt.transform);

    std::ifstream in(opt.geojson);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const RoiSet set = parse_geojson(buffer.str());
    if (set.regions.empty()) throw Error("input contains no polygons");
    if (set.extra_coord_warnings > 0)
        out << "warning: dropped third coordinate on " << set.extra_coord_warnings
            << " position(s)\n";

    std::filesystem::create_directories(opt.out_dir);
    const std::string stem = opt.geojson.stem().string();

    std::vector<ShapeMesh> meshes;
    for (const RoiPolygon& poly : set.regions)
        meshes.push_back(extrude_polygon(poly, transform, opt.half_height));
    const auto obj_path = opt.out_dir / (stem + "_mesh.obj");
    write_obj(obj_path, meshes);

    CrsRect window;
    const double pad_u = 0.02 * set.crs_bounds.width();
    const double pad_v = 0.02 * set.crs_bounds.height();
    window.expand(set.crs_bounds.min - Vec2{pad_u, pad_v});
    window.expand(set.crs_bounds.max + Vec2{pad_u, pad_v});
    const RoiTexture roi = rasterize_roi(set, window, opt.resolution, opt.resolution);

    const auto roi_path = opt.out_dir / (stem + "_roi.png");
    write_png_gray16(roi_path, ids_to_gray16(roi));

    const json sidecar = {
        {"width", roi.width},
        {"height", roi.height},
        {"crs_window",
         {roi.crs_window.min.x, roi.crs_window.min.y, roi.crs_window.max.x, roi.crs_window.max.y}},
    };
    const auto sidecar_path = opt.out_dir / (stem + "_roi.json");
    {
        std::ofstream sidecar_out(sidecar_path, std::ios::binary);
        sidecar_out << sidecar.dump(2) << "\n";
        if (!sidecar_out) throw IoError("cannot write " + sidecar_path.string());
    }

    const auto style_path = opt.out_dir / (stem + "_style.png");
    write_png_rgba8(style_path, bake_style_texture(roi, default_styles_for(set)));

    out << "baked " << set.regions.size() << " region(s):\n"
        << "  " << obj_path.string() << "\n"
        << "  " << roi_path.string() << "\n"
        << "  " << sidecar_path.string() << "\n"
        << "  " << style_path.string() << "\n";
    return 0;
}

int cmd_render(const RenderOptions& opt, std::ostream& out, std::ostream& err) {
    const std::string ext = opt.output.extension().string();
    if (ext != ".ppm" && ext != ".png")
        throw ConfigError("output extension must be .ppm or .png");

    const SceneConfig cfg = load_scene_config(opt.config);
    const auto t0 = clock_type::now();
    BuiltScene scene = build_scene(cfg);
    if (opt.no_clamp) scene.clamp_opacity = false;
    const auto t1 = clock_type::now();
    const GBuffer g = rasterize_scene(scene.terrain, scene.objects, scene.camera, scene.width,
                                      scene.height, scene.terrain_albedo, opt.threads);
    const RgbImage base = shade_base(g, scene.sun, opt.threads);
    const auto t2 = clock_type::now();
    PpsStats stats;
    const OverlayMask mask = compute_mask(scene, g, opt.technique, opt.threads, &stats);
    const auto t3 = clock_type::now();
    std::vector<ClampWarning> warnings;
    const RgbImage image = composite(base, mask, scene.styles, scene.policy, scene.clamp_opacity,
                                     &warnings, opt.threads);
    const auto t4 = clock_type::now();

    if (ext == ".ppm")
        write_ppm(opt.output, image);
    else
        write_png_rgb8(opt.output, image);

    if (opt.mask_output) {
        Gray16Image mask_img;
        mask_img.width = mask.width;
        mask_img.height = mask.height;
        mask_img.px.resize(mask.ids.size());
        for (std::size_t i = 0; i < mask.ids.size(); ++i) {
            if (mask.ids[i] > 0xFFFF)
                throw Error("region id " + std::to_string(mask.ids[i]) +
                            " does not fit a 16-bit mask image");
            mask_img.px[i] = static_cast<std::uint16_t>(mask.ids[i]);
        }
        write_png_gray16(*opt.mask_output, mask_img);
    }

    char line[160];
    out << "render report\n";
    out << "  technique: " << technique_name(opt.technique) << "\n";
    std::snprintf(line, sizeof line, "  resolution: %dx%d\n", scene.width, scene.height);
    out << line;
    std::snprintf(line, sizeof line, "  threads: %d\n", opt.threads);
    out << line;
    std::snprintf(line, sizeof line, "  bake: %.2f ms\n", elapsed_ms(t0, t1));
    out << line;
    std::snprintf(line, sizeof line, "  base raster + shade: %.2f ms\n", elapsed_ms(t1, t2));
    out << line;
    std::snprintf(line, sizeof line, "  overlay mask: %.2f ms\n", elapsed_ms(t2, t3));
    out << line;
    std::snprintf(line, sizeof line, "  composite: %.2f ms\n", elapsed_ms(t3, t4));
    out << line;
    if (opt.technique == Technique::pps) {
        std::snprintf(line, sizeof line, "  pps texture fetches: %llu\n",
                      static_cast<unsigned long long>(stats.texture_fetches));
        out << line;
    }
    if (scene.rois.extra_coord_warnings > 0) {
        out << "  dropped third coordinates: " << scene.rois.extra_coord_warnings << "\n";
        err << "warning: dropped third coordinate on " << scene.rois.extra_coord_warnings
            << " position(s)\n";
    }
    out << "  clamp warnings: " << warnings.size() << "\n";
    for (const ClampWarning& w : warnings) {
        std::snprintf(line, sizeof line, "  warning: opacity %.3f clamped to %.3f\n", w.requested,
                      w.applied);
        out << line;
        err << "warning: opacity " << w.requested << " clamped to " << w.applied << "\n";
    }
    out << "  wrote " << opt.output.string() << "\n";
    if (opt.mask_output) out << "  wrote " << opt.mask_output->string() << "\n";
    return 0;
}

int cmd_bench(const BenchCmdOptions& opt, std::ostream& out) {
    BenchOptions bench = opt.bench;
    if (opt.config) {
        std::ifstream in(*opt.config);
        if (!in) throw ConfigError("cannot open bench config: " + opt.config->string());
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("bench config is not valid JSON: ") + e.what());
        }
        if (doc.contains("techniques")) {
            bench.techniques.clear();
            for (const json& t : doc["techniques"]) {
                const auto parsed = parse_technique(t.get<std::string>());
                if (!parsed) throw ConfigError("unknown technique in bench config");
                bench.techniques.push_back(*parsed);
            }
        }
        if (doc.contains("counts")) {
            bench.counts.clear();
            for (const json& c : doc["counts"]) bench.counts.push_back(c.get<int>());
        }
        if (doc.contains("frames")) bench.frames_per_cell = doc["frames"].get<int>();
        if (doc.contains("resolution")) bench.resolution = doc["resolution"].get<int>();
        if (doc.contains("seed")) bench.seed = doc["seed"].get<std::uint64_t>();
    }
    if (bench.techniques.empty() || bench.counts.empty())
        throw ConfigError("bench needs at least one technique and one overlay count");
    if (bench.frames_per_cell < 10) throw ConfigError("bench needs at least 10 frames per cell");

    const BenchReport report = run_bench(bench);

    {
        std::ofstream csv(opt.csv_out, std::ios::binary);
        if (!csv) throw IoError("cannot write " + opt.csv_out.string());
        write_bench_csv(csv, report);
    }
    {
        json env = {
            {"width", report.env.width},
            {"height", report.env.height},
            {"seed", report.env.seed},
            {"threads", report.env.threads},
            {"frames_per_cell", report.env.frames_per_cell},
            {"warmup_frames", report.env.warmup_frames},
        };
        json fetches = json::array();
        for (const auto& [count, n] : report.pps_fetches)
            fetches.push_back({{"overlays", count}, {"fetches", n}});
        env["pps_fetches"] = fetches;
        std::ofstream env_out(opt.csv_out.string() + ".env.json", std::ios::binary);
        env_out << env.dump(2) << "\n";
    }

    const std::vector<SlopeFit> fits = fit_slopes(report);
    out << "slope table (median frame time vs overlay count)\n";
    char line[160];
    std::snprintf(line, sizeof line, "  %-8s %12s %16s %12s\n", "tech", "intercept", "ms/overlay",
                  "residual");
    out << line;
    for (const SlopeFit& fit : fits) {
        std::snprintf(line, sizeof line, "  %-8s %9.3f ms %13.4f ms %9.3f ms\n",
                      technique_name(fit.technique), fit.intercept_ms, fit.slope_ms_per_overlay,
                      fit.residual_rms);
        out << line;
    }
    if (opt.slopes_csv) {
        std::ofstream scsv(*opt.slopes_csv, std::ios::binary);
        scsv << "technique,intercept_ms,slope_ms_per_overlay,residual_rms\n";
        for (const SlopeFit& fit : fits) {
            std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f\n",
                          technique_name(fit.technique), fit.intercept_ms,
                          fit.slope_ms_per_overlay, fit.residual_rms);
            scsv << line;
        }
    }

    const auto slope_of = [&](Technique t) -> std::optional<double> {
        for (const SlopeFit& fit : fits)
            if (fit.technique == t) return fit.slope_ms_per_overlay;
        return std::nullopt;
    };
    const auto pps = slope_of(Technique::pps);
    const auto csg = slope_of(Technique::csg);
    const auto decal = slope_of(Technique::decal);
    if (pps && csg && decal) {
        const bool ordered = *pps < *csg && *csg < *decal;
        out << "ordering slope(pps) < slope(csg) < slope(decal): "
            << (ordered ? "holds" : "DOES NOT HOLD") << "\n";
    }
    out << "wrote " << opt.csv_out.string() << "\n";
    return 0;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out) {
    const SceneConfig cfg = load_scene_config(opt.config);
    const BuiltScene scene = build_scene(cfg);
    const GBuffer g = rasterize_scene(scene.terrain, scene.objects, scene.camera, scene.width,
                                      scene.height, scene.terrain_albedo, opt.threads);
    const OverlayMask mask_a = compute_mask(scene, g, opt.technique_a, opt.threads);
    const OverlayMask mask_b = compute_mask(scene, g, opt.technique_b, opt.threads);

    const double iou = mask_iou(mask_a, mask_b);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < mask_a.ids.size(); ++i)
        differing += (mask_a.ids[i] > 0) != (mask_b.ids[i] > 0);

    // Distance from each disagreeing pixel to the nearest membership boundary
    // of either mask.
    double max_boundary_dist = 0.0;
    if (differing > 0) {
        const int w = mask_a.width, h = mask_a.height;
        std::vector<std::uint8_t> boundary(mask_a.ids.size(), 0);
        const auto mark_boundary = [&](const OverlayMask& m) {
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    const bool inside = m.id_at(x, y) > 0;
                    const bool edge =
                        (x + 1 < w && (m.id_at(x + 1, y) > 0) != inside) ||
                        (y + 1 < h && (m.id_at(x, y + 1) > 0) != inside);
                    if (edge) boundary[static_cast<std::size_t>(y) * w + x] = 1;
                }
        };
        mark_boundary(mask_a);
        mark_boundary(mask_b);
        const std::vector<double> sq = distance_transform_squared(boundary, w, h);
        for (std::size_t i = 0; i < mask_a.ids.size(); ++i)
            if ((mask_a.ids[i] > 0) != (mask_b.ids[i] > 0))
                max_boundary_dist = std::max(max_boundary_dist, std::sqrt(sq[i]));
    }

    char line[160];
    out << "compare " << technique_name(opt.technique_a) << " vs "
        << technique_name(opt.technique_b) << "\n";
    std::snprintf(line, sizeof line, "  mask IoU: %.6f\n", iou);
    out << line;
    out << "  differing pixels: " << differing << "\n";
    std::snprintf(line, sizeof line, "  max boundary distance of disagreement: %.2f px\n",
                  max_boundary_dist);
    out << line;

    if (opt.diff_image) {
        RgbImage diff = RgbImage::filled(mask_a.width, mask_a.height, {0.08f, 0.08f, 0.08f});
        for (int y = 0; y < mask_a.height; ++y)
            for (int x = 0; x < mask_a.width; ++x) {
                const bool in_a = mask_a.id_at(x, y) > 0;
                const bool in_b = mask_b.id_at(x, y) > 0;
                float* px = diff.at(x, y);
                if (in_a && in_b) {
                    px[0] = px[1] = px[2] = 0.55f;
                } else if (in_a) {
                    px[0] = 0.9f;
                } else if (in_b) {
                    px[2] = 0.9f;
                }
            }
        write_png_rgb8(*opt.diff_image, diff);
        out << "  wrote " << opt.diff_image->string() << "\n";
    }
    return 0;
}

}  // namespace roverlay
