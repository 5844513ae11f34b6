// Acceptance suite: one binary, one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "roverlay/bench.hpp"
#include "roverlay/composite.hpp"
#include "roverlay/errors.hpp"
#include "roverlay/mesh.hpp"
#include "roverlay/overlay.hpp"
#include "roverlay/polygon.hpp"
#include "roverlay/rng.hpp"
#include "roverlay/roi_texture.hpp"
#include "roverlay/scene.hpp"
#include "roverlay/style.hpp"

using namespace roverlay;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec2> star_ring(SplitMix& rng, const Vec2& center, double radius, int vertices) {
    std::vector<Vec2> ring;
    const double step = 2.0 * kPi / vertices;
    for (int i = 0; i < vertices; ++i) {
        const double angle = step * (i + 0.42 * (rng.next_double() - 0.5));
        const double r = radius * (0.55 + 0.65 * rng.next_double());
        ring.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
    }
    return ring;
}

RoiPolygon random_polygon(SplitMix& rng, const Vec2& center, double radius, int vertices,
                          bool with_hole, std::uint32_t id) {
    RoiPolygon poly;
    poly.region_id = id;
    poly.exterior = star_ring(rng, center, radius, vertices);
    if (with_hole) {
        std::vector<Vec2> hole = star_ring(rng, center, radius * 0.30, std::max(3, vertices / 2));
        std::reverse(hole.begin(), hole.end());
        poly.holes.push_back(std::move(hole));
    }
    return poly;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = dot(ab, ab);
    double t = len_sq > 0.0 ? dot(p - a, ab) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return length(p - (a + ab * t));
}

double distance_to_boundary(const std::vector<RoiPolygon>& polys, const Vec2& p) {
    double best = 1e300;
    for (const RoiPolygon& poly : polys) {
        const auto ring_distance = [&](const std::vector<Vec2>& ring) {
            const std::size_t n = ring.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++)
                best = std::min(best, point_segment_distance(p, ring[j], ring[i]));
        };
        ring_distance(poly.exterior);
        for (const auto& hole : poly.holes) ring_distance(hole);
    }
    return best;
}

CrsRect make_window(double x0, double y0, double x1, double y1) {
    CrsRect w;
    w.expand({x0, y0});
    w.expand({x1, y1});
    return w;
}

// ---------------------------------------------------------------------------
// 1. Oracle agreement: 50 seeded polygons at 256x256; >= 99.5% of pixels
//    match point_in_polygon, 100% of pixels with |dist| > 1 px.
bool criterion_oracle_agreement(std::string& detail) {
    SplitMix rng(2024);
    std::size_t worst_total_mismatch = 0;
    std::size_t safe_mismatches = 0;
    for (int iter = 0; iter < 50; ++iter) {
        RoiSet set;
        set.regions.push_back(random_polygon(rng, {0, 0}, 10.0, 5 + (iter * 7) % 20,
                                             iter % 3 == 0, 1));
        const RoiTexture tex =
            rasterize_roi(set, make_window(-13, -13, 13, 13), 256, 256);
        std::size_t mismatches = 0;
        for (int y = 0; y < 256; ++y)
            for (int x = 0; x < 256; ++x) {
                const bool oracle = point_in_polygon(set.regions[0], tex.pixel_center_crs(x, y));
                const bool got = tex.id_at(x, y) > 0;
                if (oracle != got) {
                    ++mismatches;
                    if (std::abs(tex.dist_at(x, y)) > 1.0) ++safe_mismatches;
                }
            }
        worst_total_mismatch = std::max(worst_total_mismatch, mismatches);
        if (static_cast<double>(mismatches) / (256.0 * 256.0) > 0.005) {
            detail = "polygon " + std::to_string(iter) + " disagreed on " +
                     std::to_string(mismatches) + " pixels";
            return false;
        }
    }
    if (safe_mismatches != 0) {
        detail = std::to_string(safe_mismatches) + " mismatches beyond 1 px of the boundary";
        return false;
    }
    detail = "50 polygons, worst per-texture mismatch " +
             std::to_string(worst_total_mismatch) + "/65536 px, none beyond 1 px";
    return true;
}

// ---------------------------------------------------------------------------
// 2. Cross-technique equivalence on 10 seeded scenes.
struct EquivalenceScene {
    Heightfield terrain;
    Camera camera;
    std::vector<RoiPolygon> polygons;
    RoiTexture roi;
    std::vector<ShapeMesh> meshes;
    DecalTexture decal_tex;
    Projector projector;
};

EquivalenceScene build_equivalence_scene(int index) {
    EquivalenceScene scene;
    const bool hilly = index >= 5;
    scene.terrain = procedural_heightfield(100 + static_cast<std::uint64_t>(index), 129, 129, 0.5,
                                           hilly ? 2.5 : 0.0);
    const double elevation_deg = 30.0 + 5.0 * index;
    const double elev = elevation_deg * kPi / 180.0;
    const Vec3 center{32.0, 0.0, 32.0};
    const double dist = 60.0;
    scene.camera = Camera::look_at(center + Vec3{0.0, dist * std::sin(elev),
                                                 -dist * std::cos(elev)},
                                   center, 50.0, 1.0);

    SplitMix rng(900 + static_cast<std::uint64_t>(index));
    const int n_polys = index % 2 == 0 ? 2 : 1;
    RoiSet set;
    for (int k = 0; k < n_polys; ++k) {
        const Vec2 c{rng.uniform(22.0, 42.0), rng.uniform(22.0, 42.0)};
        set.regions.push_back(random_polygon(rng, c, rng.uniform(8.0, 12.0),
                                             rng.uniform_int(8, 18), k == 1,
                                             static_cast<std::uint32_t>(k + 1)));
    }
    scene.polygons = set.regions;

    const CrsRect window = make_window(0, 0, 64, 64);
    scene.roi = rasterize_roi(set, window, 512, 512);
    const double half_height = std::max(10.0 * scene.terrain.max_abs_height(), 5.0);
    for (const RoiPolygon& poly : set.regions)
        scene.meshes.push_back(extrude_polygon(poly, WorldCrsTransform::identity(), half_height));
    StyleMap styles;
    for (const RoiPolygon& poly : set.regions) {
        styles[poly.region_id] = OverlayStyle::make(Pattern::fill, Density::low);
        styles[poly.region_id].opacity = 0.45;
    }
    scene.decal_tex = make_decal_texture(scene.roi, bake_style_texture(scene.roi, styles));
    scene.projector = Projector::top_down_ortho(window, 4.0 * half_height, 8.0 * half_height);
    return scene;
}

bool criterion_equivalence(std::string& detail) {
    double worst_iou = 1.0;
    for (int index = 0; index < 10; ++index) {
        const EquivalenceScene scene = build_equivalence_scene(index);
        const GBuffer g = rasterize_scene(scene.terrain, {}, scene.camera, 512, 512);
        const OverlayMask csg = csg_mask(g, scene.meshes, scene.camera);
        const OverlayMask decal = apply_decal(g, scene.projector, scene.decal_tex);
        const OverlayMask pps = pps_lookup(g, WorldCrsTransform::identity(), scene.roi);

        std::size_t covered = 0;
        for (auto id : pps.ids) covered += id > 0;
        if (covered < 5000) {
            detail = "scene " + std::to_string(index) + " has too little coverage to compare";
            return false;
        }

        const double texel_diag =
            std::sqrt(2.0) * scene.roi.crs_window.width() / scene.roi.width;
        const OverlayMask* masks[3] = {&csg, &decal, &pps};
        const char* names[3] = {"csg", "decal", "pps"};
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                const double iou = mask_iou(*masks[a], *masks[b]);
                worst_iou = std::min(worst_iou, iou);
                if (iou < 0.95) {
                    detail = "scene " + std::to_string(index) + ": IoU(" + names[a] + "," +
                             names[b] + ") = " + std::to_string(iou);
                    return false;
                }
                for (int y = 0; y < 512; ++y)
                    for (int x = 0; x < 512; ++x) {
                        const std::size_t idx = g.index(x, y);
                        if ((masks[a]->ids[idx] > 0) == (masks[b]->ids[idx] > 0)) continue;
                        if (g.layer[idx] == Layer::sky) continue;
                        const Vec2 crs{g.world[idx].x, g.world[idx].z};
                        // Local CRS footprint of 1 screen pixel.
                        double crs_per_px = 0.0;
                        if (x + 1 < 512 && g.layer[g.index(x + 1, y)] != Layer::sky)
                            crs_per_px = std::max(
                                crs_per_px, length(Vec2{g.world[g.index(x + 1, y)].x,
                                                        g.world[g.index(x + 1, y)].z} -
                                                   crs));
                        if (y + 1 < 512 && g.layer[g.index(x, y + 1)] != Layer::sky)
                            crs_per_px = std::max(
                                crs_per_px, length(Vec2{g.world[g.index(x, y + 1)].x,
                                                        g.world[g.index(x, y + 1)].z} -
                                                   crs));
                        if (crs_per_px == 0.0) crs_per_px = 0.2;
                        const double allowed = std::max(2.0 * crs_per_px, texel_diag);
                        const double boundary = distance_to_boundary(scene.polygons, crs);
                        if (boundary > allowed) {
                            char buf[160];
                            std::snprintf(buf, sizeof buf,
                                          "scene %d: %s/%s disagreement %.2f crs units from the "
                                          "boundary (allowed %.2f)",
                                          index, names[a], names[b], boundary, allowed);
                            detail = buf;
                            return false;
                        }
                    }
            }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "10 scenes, worst pairwise IoU %.4f, disagreements confined",
                  worst_iou);
    detail = buf;
    return true;
}

// ---------------------------------------------------------------------------
// 3. Performance ordering at 512x512, counts {1,2,4,8,16,32}, 20 frames/cell.
bool criterion_performance(std::string& detail) {
    BenchOptions opt;
    opt.counts = {1, 2, 4, 8, 16, 32};
    opt.frames_per_cell = 20;
    opt.warmup_frames = 3;
    opt.resolution = 512;
    opt.seed = 7;
    const BenchReport report = run_bench(opt);

    for (const auto& [count, fetches] : report.pps_fetches)
        if (fetches != static_cast<std::uint64_t>(512) * 512) {
            detail = "pps fetch count at " + std::to_string(count) + " overlays was " +
                     std::to_string(fetches);
            return false;
        }
    if (report.pps_fetches.size() != opt.counts.size()) {
        detail = "missing pps fetch records";
        return false;
    }

    double slope_csg = 0, slope_decal = 0, slope_pps = 0;
    for (const SlopeFit& fit : fit_slopes(report)) {
        if (fit.technique == Technique::csg) slope_csg = fit.slope_ms_per_overlay;
        if (fit.technique == Technique::decal) slope_decal = fit.slope_ms_per_overlay;
        if (fit.technique == Technique::pps) slope_pps = fit.slope_ms_per_overlay;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "slopes ms/overlay: pps %.4f, csg %.4f, decal %.4f (pps/decal %.3f)",
                  slope_pps, slope_csg, slope_decal,
                  slope_decal > 0 ? slope_pps / slope_decal : -1.0);
    detail = buf;
    if (!(slope_pps < slope_csg && slope_csg < slope_decal)) return false;
    if (!(slope_pps < 0.10 * slope_decal)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// 4. Boundary quality: csg follows the analytic edge within 1 px; the texture
//    route deviates by at least 4 px once one texel covers >= 8 screen px.
bool criterion_boundary_quality(std::string& detail) {
    Heightfield terrain;
    terrain.nx = terrain.nz = 129;
    terrain.cell_size = 0.5;
    terrain.heights.assign(129 * 129, 0.0);

    Camera cam;
    cam.position = {32.0, 40.0, 32.0};
    cam.forward = {0.0, -1.0, 0.0};
    cam.up = {0.0, 0.0, -1.0};  // image x tracks world +x
    cam.vfov_deg = 2.0 * std::atan(8.0 / 40.0) * 180.0 / kPi;  // half extent 8 world units
    cam.aspect = 1.0;
    cam.near_clip = 0.1;
    cam.far_clip = 1e5;

    // 12x12 square rotated 7 degrees about the view center.
    const double angle = 7.0 * kPi / 180.0;
    const double c = std::cos(angle), s = std::sin(angle);
    RoiPolygon poly;
    poly.region_id = 1;
    for (const Vec2 corner : {Vec2{-6, -6}, Vec2{6, -6}, Vec2{6, 6}, Vec2{-6, 6}})
        poly.exterior.push_back(
            {32.0 + c * corner.x - s * corner.y, 32.0 + s * corner.x + c * corner.y});
    RoiSet set;
    set.regions.push_back(poly);

    const CrsRect window = make_window(0, 0, 64, 64);
    const RoiTexture roi = rasterize_roi(set, window, 256, 256);
    // One texel in screen pixels: texel size 0.25 crs, 32 px per crs unit.
    const double texel_px = (window.width() / roi.width) * (512.0 / 16.0);
    if (texel_px < 8.0) {
        detail = "scene setup error: texel covers only " + std::to_string(texel_px) + " px";
        return false;
    }

    const GBuffer g = rasterize_scene(terrain, {}, cam, 512, 512);
    const std::vector<ShapeMesh> meshes = {
        extrude_polygon(poly, WorldCrsTransform::identity(), 10.0)};
    const OverlayMask csg = csg_mask(g, meshes, cam);
    const OverlayMask pps = pps_lookup(g, WorldCrsTransform::identity(), roi);

    // The square's left edge runs from corner 3 to corner 0 (world space).
    const Vec2 top = poly.exterior[3];
    const Vec2 bottom = poly.exterior[0];

    double csg_max_dev = 0.0;
    double pps_max_dev = 0.0;
    int scanlines = 0;
    for (int y = 0; y < 512; ++y) {
        // World z of this scanline's pixel centers (flat terrain, top-down).
        const std::size_t row_idx = g.index(256, y);
        if (g.layer[row_idx] == Layer::sky) continue;
        const double world_z = g.world[row_idx].z;
        // Clamp to the middle of the edge span to stay clear of the corners.
        const double z_lo = std::min(top.y, bottom.y) + 2.0;
        const double z_hi = std::max(top.y, bottom.y) - 2.0;
        if (world_z < z_lo || world_z > z_hi) continue;
        const double t = (world_z - bottom.y) / (top.y - bottom.y);
        const double edge_world_x = bottom.x + t * (top.x - bottom.x);
        const auto projected = project(cam, 512, 512, {edge_world_x, 0.0, world_z});
        if (!projected) continue;
        const double edge_px = projected->px;

        const auto first_covered = [&](const OverlayMask& mask) {
            for (int x = 0; x < 512; ++x)
                if (mask.id_at(x, y) > 0) return x;
            return -1;
        };
        const int csg_x = first_covered(csg);
        const int pps_x = first_covered(pps);
        if (csg_x < 0 || pps_x < 0) continue;
        ++scanlines;
        // The mask boundary sits on the pixel boundary between the last
        // uncovered and first covered pixel, i.e. at integer coordinate x.
        const double csg_dev = std::abs(csg_x - edge_px);
        const double pps_dev = std::abs(pps_x - edge_px);
        csg_max_dev = std::max(csg_max_dev, csg_dev);
        pps_max_dev = std::max(pps_max_dev, pps_dev);
        if (csg_dev > 1.0) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "csg edge off by %.2f px at scanline %d", csg_dev, y);
            detail = buf;
            return false;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d scanlines, texel %.1f px: csg max deviation %.2f px, pps max %.2f px",
                  scanlines, texel_px, csg_max_dev, pps_max_dev);
    detail = buf;
    if (scanlines < 100) return false;
    return pps_max_dev >= 4.0;
}

// ---------------------------------------------------------------------------
// 5. Parity robustness: bit-identical masks across extrusion heights, and the
//    manifold gate rejects a mesh with a deleted triangle.
bool criterion_parity(std::string& detail) {
    const Heightfield terrain = procedural_heightfield(55, 129, 129, 0.5, 3.0);
    const double max_h = terrain.max_abs_height();
    Camera cam = Camera::look_at({-10.0, 35.0, -16.0}, {32.0, 0.0, 32.0}, 55.0, 1.0);
    const GBuffer g = rasterize_scene(terrain, {}, cam, 512, 512);

    SplitMix rng(64);
    const RoiPolygon poly = random_polygon(rng, {34.0, 30.0}, 11.0, 16, true, 1);

    OverlayMask reference;
    bool first = true;
    for (const double factor : {1.5, 10.0, 100.0}) {
        const std::vector<ShapeMesh> meshes = {
            extrude_polygon(poly, WorldCrsTransform::identity(), factor * max_h)};
        const OverlayMask mask = csg_mask(g, meshes, cam);
        if (first) {
            reference = mask;
            first = false;
            std::size_t covered = 0;
            for (auto id : mask.ids) covered += id > 0;
            if (covered < 2000) {
                detail = "mask nearly empty (" + std::to_string(covered) + " px)";
                return false;
            }
        } else if (mask.ids != reference.ids) {
            std::size_t diffs = 0;
            for (std::size_t i = 0; i < mask.ids.size(); ++i)
                diffs += mask.ids[i] != reference.ids[i];
            detail = "masks differ at factor " + std::to_string(factor) + " on " +
                     std::to_string(diffs) + " px";
            return false;
        }
    }

    ShapeMesh open = extrude_polygon(poly, WorldCrsTransform::identity(), 10.0 * max_h);
    open.triangles.pop_back();
    try {
        (void)csg_mask(g, {open}, cam);
        detail = "open mesh was not rejected";
        return false;
    } catch (const OpenMesh&) {
    }
    detail = "masks bit-identical at 1.5x/10x/100x; open mesh rejected";
    return true;
}

// ---------------------------------------------------------------------------
// 6. Style system: exact compositing identities, pattern coverage fractions
//    at a 4096x4096 window, opacity clamping to [0.20, 0.70].
bool criterion_style(std::string& detail) {
    SplitMix rng(8);
    RgbImage base = RgbImage::filled(64, 64, {0, 0, 0});
    for (float& v : base.px) v = static_cast<float>(rng.next_double());
    OverlayMask mask;
    mask.width = mask.height = 64;
    mask.ids.assign(64 * 64, 1);
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    styles[1].color = {0.8f, 0.3f, 0.6f};

    styles[1].opacity = 0.0;
    const RgbImage zero = composite(base, mask, styles, OpacityPolicy{}, false);
    for (std::size_t i = 0; i < base.px.size(); ++i)
        if (zero.px[i] != base.px[i]) {
            detail = "alpha 0 is not a no-op";
            return false;
        }
    styles[1].opacity = 1.0;
    const RgbImage one = composite(base, mask, styles, OpacityPolicy{}, false);
    for (std::size_t i = 0; i < base.px.size(); i += 3) {
        if (one.px[i] != styles[1].color.r || one.px[i + 1] != styles[1].color.g ||
            one.px[i + 2] != styles[1].color.b) {
            detail = "alpha 1 does not replace with the style color";
            return false;
        }
    }
    for (const double alpha : {0.25, 0.5, 0.75}) {
        styles[1].opacity = alpha;
        const RgbImage mixed = composite(base, mask, styles, OpacityPolicy{}, false);
        const float color[3] = {styles[1].color.r, styles[1].color.g, styles[1].color.b};
        for (std::size_t i = 0; i < mixed.px.size(); ++i) {
            const float lo = std::min(base.px[i], color[i % 3]);
            const float hi = std::max(base.px[i], color[i % 3]);
            // 1 ULP slack around the convex hull of the endpoints.
            if (mixed.px[i] < std::nextafter(lo, -1.0f) ||
                mixed.px[i] > std::nextafter(hi, 2.0f)) {
                detail = "convexity violated";
                return false;
            }
        }
    }

    // Pattern coverage at the acceptance window: 4096/1920 scaling makes the
    // stripe period 1024 and the dot pitch 2048 tile the window exactly.
    const int n = 4096;
    for (const Density density : {Density::low, Density::high}) {
        const OverlayStyle stripes =
            OverlayStyle::make(Pattern::stripes, density).scaled_for_bake(n);
        std::size_t covered = 0;
        for (int x = 0; x < n; ++x)
            if (eval_pattern(stripes, {x + 0.5, 0.5}, -1e6)) ++covered;
        const double fraction = static_cast<double>(covered) / n;
        if (std::abs(fraction - 0.5) > 0.005) {
            detail = "stripe coverage " + std::to_string(fraction);
            return false;
        }
    }
    double dot_fractions[2];
    int slot = 0;
    for (const Density density : {Density::low, Density::high}) {
        const OverlayStyle dots = OverlayStyle::make(Pattern::dots, density).scaled_for_bake(n);
        std::size_t covered = 0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                if (eval_pattern(dots, {x + 0.5, y + 0.5}, -1e6)) ++covered;
        dot_fractions[slot++] =
            static_cast<double>(covered) / (static_cast<double>(n) * n);
    }
    const double expected_dots = kPi / 16.0;
    for (const double fraction : dot_fractions)
        if (std::abs(fraction - expected_dots) / expected_dots > 0.01) {
            detail = "dot coverage " + std::to_string(fraction) + " vs pi/16 " +
                     std::to_string(expected_dots);
            return false;
        }

    const OpacityPolicy policy;
    if (effective_opacity(0.05, policy) != 0.20 || effective_opacity(0.90, policy) != 0.70 ||
        effective_opacity(0.45, policy) != 0.45) {
        detail = "clamping to [0.20, 0.70] failed";
        return false;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "identities exact; dots %.4f/%.4f vs pi/16 %.4f; clamp [0.20,0.70] ok",
                  dot_fractions[0], dot_fractions[1], expected_dots);
    detail = buf;
    return true;
}

// ---------------------------------------------------------------------------
// 7. Determinism: byte-identical renders across runs and thread counts,
//    byte-identical bakes across runs (through the CLI).
std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion_determinism(std::string& detail) {
    const fs::path data_dir = fs::path(ROVERLAY_DATA_DIR);
    const fs::path tmp = fs::temp_directory_path() / "roverlay_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const std::string cli = ROVERLAY_CLI_PATH;
    const std::string config = (data_dir / "hilly_scene.json").string();

    const auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };

    const fs::path r1 = tmp / "render1.ppm";
    const fs::path r2 = tmp / "render2.ppm";
    const fs::path r4 = tmp / "render4.ppm";
    if (!run("render " + config + " " + r1.string() + " --technique csg --threads 1") ||
        !run("render " + config + " " + r2.string() + " --technique csg --threads 1") ||
        !run("render " + config + " " + r4.string() + " --technique csg --threads 4")) {
        detail = "render command failed";
        return false;
    }
    if (slurp(r1) != slurp(r2)) {
        detail = "renders differ between two identical runs";
        return false;
    }
    if (slurp(r1) != slurp(r4)) {
        detail = "renders differ between 1 and 4 threads";
        return false;
    }

    const fs::path bake1 = tmp / "bake1";
    const fs::path bake2 = tmp / "bake2";
    const std::string geojson = (data_dir / "sample_roi.geojson").string();
    if (!run("bake " + geojson + " --out " + bake1.string() + " --resolution 512") ||
        !run("bake " + geojson + " --out " + bake2.string() + " --resolution 512")) {
        detail = "bake command failed";
        return false;
    }
    for (const char* name :
         {"sample_roi_mesh.obj", "sample_roi_roi.png", "sample_roi_roi.json",
          "sample_roi_style.png"}) {
        if (slurp(bake1 / name) != slurp(bake2 / name)) {
            detail = std::string("bake artifact differs: ") + name;
            return false;
        }
    }
    detail = "renders identical across runs and {1,4} threads; bakes identical";
    return true;
}

struct Criterion {
    int number;
    const char* name;
    std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "oracle agreement", criterion_oracle_agreement},
        {2, "cross-technique equivalence", criterion_equivalence},
        {3, "performance ordering", criterion_performance},
        {4, "boundary quality", criterion_boundary_quality},
        {5, "parity robustness", criterion_parity},
        {6, "style system", criterion_style},
        {7, "determinism", criterion_determinism},
    };
    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %d. %s (%.1fs) — %s\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.name, seconds, detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0)
        std::printf("all 7 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures;
}
