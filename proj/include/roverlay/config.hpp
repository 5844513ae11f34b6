#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "roverlay/bench.hpp"
#include "roverlay/overlay.hpp"
#include "roverlay/scene.hpp"
#include "roverlay/style.hpp"

namespace roverlay {

struct TerrainConfig {
    std::string png;  // empty -> procedural
    double height_scale = 30.0;
    double height_offset = 0.0;
    std::uint64_t seed = 1;
    int nx = 129;
    int nz = 129;
    double amplitude = 5.0;
    double cell_size = 1.0;
    Color3f albedo{0.35f, 0.42f, 0.25f};
};

struct ObjectConfig {
    std::string type;  // "cone" | "box"
    Vec3 position;     // cone base center
    double radius = 1.0;
    double height = 2.0;
    int segments = 16;
    Vec3 box_min, box_max;
    Color3f albedo{0.8f, 0.8f, 0.8f};
};

struct OverlayFileConfig {
    std::filesystem::path geojson;
    StyleMap styles;
    OverlayStyle default_style;
    bool has_default_style = false;
};

// One JSON document (schema 1) describing terrain, camera, sun, the
// world<->CRS transform and the overlay inputs.
struct SceneConfig {
    int schema = 1;
    int width = 512;
    int height = 512;
    TerrainConfig terrain;
    std::vector<ObjectConfig> objects;
    Camera camera;
    SunLight sun;
    std::array<double, 6> transform{1, 0, 0, 1, 0, 0};
    std::vector<OverlayFileConfig> overlays;
    OpacityPolicy policy;
    bool clamp_opacity = true;
    int roi_width = 1024;
    int roi_height = 1024;
    bool has_crs_window = false;
    CrsRect crs_window;
    double half_height = 0.0;  // <= 0 -> 10x max terrain |height|
    bool decal_affects_objects = false;
    std::filesystem::path base_dir;
};

// Parses and fully validates a scene config; every problem is collected and
// reported in one ConfigError before anything is loaded or rendered.
SceneConfig load_scene_config(const std::filesystem::path& path);

// The whole offline stage: terrain, occluders, parsed RoI sets, extruded
// meshes, rasterized and styled textures, decal projector.
struct BuiltScene {
    int width = 0;
    int height = 0;
    Heightfield terrain;
    Color3f terrain_albedo;
    std::vector<SceneMesh> objects;
    Camera camera;
    SunLight sun;
    WorldCrsTransform transform;
    RoiSet rois;
    StyleMap styles;
    OpacityPolicy policy;
    bool clamp_opacity = true;
    double half_height = 0.0;
    RoiTexture roi_texture;
    std::vector<ShapeMesh> shape_meshes;
    DecalTexture decal_texture;
    Projector decal_projector;
    LayerFilter decal_filter;
};

BuiltScene build_scene(const SceneConfig& cfg);

OverlayMask compute_mask(const BuiltScene& scene, const GBuffer& g, Technique technique,
                         int threads = 1, PpsStats* stats = nullptr);

}  // namespace roverlay
