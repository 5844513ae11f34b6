#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "roverlay/geojson.hpp"
#include "roverlay/transform.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Closed triangle mesh with consistent outward winding. Extruded region
// prisms keep every vertex at y = -h or y = +h.
struct ShapeMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::uint32_t region_id = 0;
};

// True when every undirected edge is shared by exactly two triangles with
// opposite direction (closed, consistently oriented 2-manifold).
bool is_closed_manifold(const ShapeMesh& mesh);

// Divergence-theorem volume; positive for outward winding.
double signed_volume(const ShapeMesh& mesh);

// Sweeps the polygon footprint (mapped to world space through the transform)
// from y = -half_height to y = +half_height and closes it with triangulated
// caps. The result is a closed manifold wound outward.
ShapeMesh extrude_polygon(const RoiPolygon& poly, const WorldCrsTransform& transform,
                          double half_height);

// OBJ text serialization; one "o region_<id>" object per mesh.
void write_obj(const std::filesystem::path& path, const std::vector<ShapeMesh>& meshes);
std::vector<ShapeMesh> read_obj(const std::filesystem::path& path);

}  // namespace roverlay
