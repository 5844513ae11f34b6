#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "roverlay/geojson.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Even-odd membership over exterior and holes, half-open: edges are owned by
// the lower-left, so a point exactly on a right or top boundary is outside.
// This is the ground-truth convention shared by the rasterizer and every
// overlay technique.
bool point_in_polygon(const RoiPolygon& poly, const Vec2& q);

// Cap triangulation of a polygon with holes. `vertices` is the exterior ring
// followed by each hole ring in order; `triangles` index into it. A valid
// result has exactly n + 2h - 2 triangles for n total ring vertices and h
// holes, and its signed areas sum to the polygon area.
struct CapTriangulation {
    std::vector<Vec2> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

// Ear clipping with hole bridging. Throws TriangulationFailure when the input
// is self-intersecting (no ear can be found).
CapTriangulation triangulate_cap(const RoiPolygon& poly);

// Area enclosed by the polygon (exterior minus holes).
double polygon_area(const RoiPolygon& poly);

}  // namespace roverlay
