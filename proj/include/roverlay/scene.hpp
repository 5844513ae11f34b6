#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "roverlay/image.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Regular elevation grid. Vertex (i, j) sits at world
// (i * cell_size, heights[j*nx + i], j * cell_size).
struct Heightfield {
    int nx = 0;
    int nz = 0;
    double cell_size = 1.0;
    std::vector<double> heights;

    double height_at(int i, int j) const { return heights[static_cast<std::size_t>(j) * nx + i]; }
    Vec3 vertex(int i, int j) const {
        return {i * cell_size, height_at(i, j), j * cell_size};
    }
    double extent_x() const { return (nx - 1) * cell_size; }
    double extent_z() const { return (nz - 1) * cell_size; }
    double max_abs_height() const;
    // Central-difference surface normal at a grid vertex.
    Vec3 normal_at(int i, int j) const;
};

// Seeded multi-octave value noise; identical output on every platform.
Heightfield procedural_heightfield(std::uint64_t seed, int nx, int nz, double cell_size,
                                   double amplitude, int octaves = 4,
                                   double base_wavelength_cells = 48.0);

Heightfield heightfield_from_gray16(const Gray16Image& img, double cell_size, double height_scale,
                                    double height_offset);

struct Camera {
    Vec3 position{0.0, 10.0, 0.0};
    Vec3 forward{0.0, 0.0, 1.0};
    Vec3 up{0.0, 1.0, 0.0};
    double vfov_deg = 50.0;
    double aspect = 1.0;
    double near_clip = 0.1;
    double far_clip = 1e5;

    struct Basis {
        Vec3 right, up, forward;
    };
    // Orthonormal frame with `up` re-orthogonalized against `forward`.
    Basis basis() const;

    static Camera look_at(const Vec3& position, const Vec3& target, double vfov_deg,
                          double aspect, const Vec3& up = {0.0, 1.0, 0.0});
};

struct ProjectedPoint {
    double px = 0.0;  // pixel coordinates; pixel (i, j) center is (i+0.5, j+0.5)
    double py = 0.0;
    double depth = 0.0;  // camera-space distance along forward
};

// Perspective projection; nullopt for points closer than the near plane.
std::optional<ProjectedPoint> project(const Camera& cam, int width, int height, const Vec3& p);
Vec3 unproject(const Camera& cam, int width, int height, double px, double py, double depth);

enum class Layer : std::uint8_t { sky = 0, terrain = 1, object = 2 };

struct GBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> depth;     // +inf where no geometry
    std::vector<Vec3> world;
    std::vector<Vec3> normal;
    std::vector<Color3f> albedo;
    std::vector<Layer> layer;

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

// Primitive occluder mesh with flat per-vertex normals.
struct SceneMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;  // one per vertex
    std::vector<std::array<std::uint32_t, 3>> triangles;
    Color3f albedo{0.8f, 0.8f, 0.8f};
    Layer layer = Layer::object;
};

SceneMesh make_cone(const Vec3& base_center, double radius, double height, int segments,
                    const Color3f& albedo);
SceneMesh make_box(const Vec3& min_corner, const Vec3& max_corner, const Color3f& albedo);

// Depth-buffered rasterization of the terrain grid plus object meshes with
// perspective-correct attributes and top-left edge ownership. Output is
// bit-identical for any thread count.
GBuffer rasterize_scene(const Heightfield& terrain, const std::vector<SceneMesh>& objects,
                        const Camera& cam, int width, int height,
                        const Color3f& terrain_albedo = {0.35f, 0.42f, 0.25f}, int threads = 1);

struct SunLight {
    Vec3 direction{0.3, -0.8, 0.4};  // direction the light travels
    double intensity = 1.0;
    double ambient = 0.25;
    Color3f sky_color{0.55f, 0.70f, 0.90f};
};

// Lambert shading: albedo * (ambient + intensity * max(0, n . -sun_dir)).
// Values are not clamped; encoding clamps at write time.
RgbImage shade_base(const GBuffer& g, const SunLight& sun, int threads = 1);

}  // namespace roverlay
