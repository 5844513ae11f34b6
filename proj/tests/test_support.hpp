#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "roverlay/geojson.hpp"
#include "roverlay/rng.hpp"
#include "roverlay/vec.hpp"

namespace roverlay::test {

// Star polygon: radii jittered, angles monotone, so always simple.
inline std::vector<Vec2> star_ring(SplitMix& rng, const Vec2& center, double radius,
                                   int vertices) {
    std::vector<Vec2> ring;
    ring.reserve(static_cast<std::size_t>(vertices));
    const double step = 2.0 * 3.14159265358979323846 / vertices;
    for (int i = 0; i < vertices; ++i) {
        const double angle = step * (i + 0.42 * (rng.next_double() - 0.5));
        const double r = radius * (0.55 + 0.65 * rng.next_double());
        ring.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
    }
    return ring;
}

inline RoiPolygon random_polygon(SplitMix& rng, const Vec2& center, double radius, int vertices,
                                 bool with_hole, std::uint32_t region_id) {
    RoiPolygon poly;
    poly.region_id = region_id;
    poly.exterior = star_ring(rng, center, radius, vertices);
    if (with_hole) {
        std::vector<Vec2> hole = star_ring(rng, center, radius * 0.30,
                                           std::max(3, vertices / 2));
        std::reverse(hole.begin(), hole.end());  // clockwise
        poly.holes.push_back(std::move(hole));
    }
    return poly;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len_sq = dot(ab, ab);
    double t = len_sq > 0.0 ? dot(p - a, ab) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 nearest = a + ab * t;
    return length(p - nearest);
}

inline double distance_to_polygon_boundary(const RoiPolygon& poly, const Vec2& p) {
    double best = 1e300;
    const auto ring_distance = [&](const std::vector<Vec2>& ring) {
        const std::size_t n = ring.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++)
            best = std::min(best, point_segment_distance(p, ring[j], ring[i]));
    };
    ring_distance(poly.exterior);
    for (const auto& hole : poly.holes) ring_distance(hole);
    return best;
}

}  // namespace roverlay::test
