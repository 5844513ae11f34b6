#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "roverlay/composite.hpp"
#include "roverlay/overlay.hpp"
#include "roverlay/scene.hpp"

namespace roverlay {

enum class Technique { csg, decal, pps };

std::optional<Technique> parse_technique(const std::string& name);
const char* technique_name(Technique t);

struct BenchRow {
    Technique technique;
    int overlays = 0;
    int frame = 0;
    double ms = 0.0;
};

struct BenchEnvironment {
    int width = 0;
    int height = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    int frames_per_cell = 0;
    int warmup_frames = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    BenchEnvironment env;
    // One entry per (overlay count, per-frame PPS fetch count) cell.
    std::vector<std::pair<int, std::uint64_t>> pps_fetches;
};

struct SlopeFit {
    Technique technique;
    double intercept_ms = 0.0;
    double slope_ms_per_overlay = 0.0;
    double residual_rms = 0.0;
};

struct BenchSceneParams {
    int terrain_grid = 129;
    double terrain_extent = 200.0;
    double terrain_amplitude = 4.0;
    int polygon_vertices = 16;
    double footprint_radius = 7.0;
    double camera_elevation_deg = 60.0;
    double camera_vfov_deg = 55.0;
    int roi_texture_size = 1024;
    int decal_texture_size = 256;
    double half_height_factor = 10.0;
};

// Everything one benchmark cell needs, baked from a single RoiSet: shape
// meshes for CSG, one per-overlay projector+texture pair for the decal pass
// and one merged id texture shared by PPS.
struct BenchScene {
    Heightfield terrain;
    Camera camera;
    WorldCrsTransform transform;
    RoiSet rois;
    std::vector<ShapeMesh> meshes;
    RoiTexture roi_texture;
    std::vector<Projector> decal_projectors;
    std::vector<DecalTexture> decal_textures;
    StyleMap styles;
    OpacityPolicy policy;
    SunLight sun;
};

BenchScene generate_bench_scene(std::uint64_t seed, int n_overlays,
                                const BenchSceneParams& params = {});

struct BenchOptions {
    std::vector<Technique> techniques{Technique::csg, Technique::decal, Technique::pps};
    std::vector<int> counts{1, 2, 4, 8, 16, 32};
    int frames_per_cell = 20;
    int warmup_frames = 3;
    int resolution = 512;
    std::uint64_t seed = 7;
    int threads = 1;
    BenchSceneParams scene;
};

// Times the overlay phase (mask computation + compositing) per frame; the
// base raster is rendered once per cell and excluded.
BenchReport run_bench(const BenchOptions& opt);

// Least-squares line over (overlay count, median frame ms) per technique.
// Throws InsufficientData below 3 distinct counts.
std::vector<SlopeFit> fit_slopes(const BenchReport& report);

// |a>0 and b>0| / |a>0 or b>0|; 1.0 when both masks are empty.
double mask_iou(const OverlayMask& a, const OverlayMask& b);

// Writes "technique,overlays,frame,ms" rows.
void write_bench_csv(std::ostream& out, const BenchReport& report);

double median(std::vector<double> values);
std::map<int, double> median_ms_per_count(const BenchReport& report, Technique technique);

// Per-overlay decal stacking: later samples overwrite earlier ones.
void merge_mask(OverlayMask& accum, const OverlayMask& layer);

// Overlay phase of one frame: computes the technique's mask over a prepared
// G-buffer and composites it onto the base image.
RgbImage render_overlay_phase(const BenchScene& scene, const GBuffer& g, const RgbImage& base,
                              Technique technique, int threads, PpsStats* stats = nullptr,
                              OverlayMask* mask_out = nullptr);

}  // namespace roverlay
