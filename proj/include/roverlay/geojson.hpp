#pragma once

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "roverlay/vec.hpp"

namespace roverlay {

// Axis-aligned rectangle in CRS units.
struct CrsRect {
    Vec2 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    bool valid() const { return min.x <= max.x && min.y <= max.y; }
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }

    void expand(const Vec2& p) {
        if (p.x < min.x) min.x = p.x;
        if (p.y < min.y) min.y = p.y;
        if (p.x > max.x) max.x = p.x;
        if (p.y > max.y) max.y = p.y;
    }

    bool contains(const Vec2& p) const {
        return p.x >= min.x && p.x < max.x && p.y >= min.y && p.y < max.y;
    }
};

// One region of interest: an exterior ring (counter-clockwise) with optional
// holes (clockwise). Rings are normalized: no closing duplicate vertex.
// region_id 0 is reserved for "no overlay" and never appears here.
struct RoiPolygon {
    std::vector<Vec2> exterior;
    std::vector<std::vector<Vec2>> holes;
    std::uint32_t region_id = 0;
};

struct RoiSet {
    std::vector<RoiPolygon> regions;
    CrsRect crs_bounds;
    // Number of coordinates whose third (or later) element was dropped.
    int extra_coord_warnings = 0;
};

// Parses a GeoJSON document containing a Polygon, MultiPolygon, Feature or
// FeatureCollection (geometries limited to Polygon/MultiPolygon).
//
// Region ids are assigned 1..n in document order; a feature property "id"
// holding a positive integer overrides the id of the polygons it produces.
// Rings must be explicitly closed in the input; the closing vertex is
// dropped and orientation is fixed during normalization.
//
// Throws ParseError, UnsupportedGeometry, DegenerateRing or UnclosedRing.
RoiSet parse_geojson(std::string_view text);

// Shoelace signed area; positive for counter-clockwise rings.
double ring_signed_area(const std::vector<Vec2>& ring);

}  // namespace roverlay
