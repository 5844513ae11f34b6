#include "roverlay/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roverlay/errors.hpp"

namespace roverlay {

namespace {

// Half-open crossing test for one ring: toggles parity for edges straddling
// the horizontal line through q, counting crossings strictly right of q.
bool ring_parity(const std::vector<Vec2>& ring, const Vec2& q) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = ring[j];
        const Vec2& b = ring[i];
        if ((a.y <= q.y) != (b.y <= q.y)) {
            const double x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

bool point_in_polygon(const RoiPolygon& poly, const Vec2& q) {
    bool inside = ring_parity(poly.exterior, q);
    for (const auto& hole : poly.holes) inside ^= ring_parity(hole, q);
    return inside;
}

double polygon_area(const RoiPolygon& poly) {
    double area = ring_signed_area(poly.exterior);
    for (const auto& hole : poly.holes) area += ring_signed_area(hole);
    return area;
}

namespace {

double tri_cross(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

// Point strictly or on-boundary inside the CCW triangle (a, b, c).
bool in_triangle_inclusive(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
    return tri_cross(a, b, p) >= 0.0 && tri_cross(b, c, p) >= 0.0 && tri_cross(c, a, p) >= 0.0;
}

struct MergedRing {
    const std::vector<Vec2>* vertices = nullptr;
    std::vector<std::uint32_t> order;  // vertex ids along the ring, CCW

    const Vec2& at(std::size_t i) const { return (*vertices)[order[i]]; }
};

// Connects a hole into the outer ring with a two-way bridge so that a single
// ring remains. Rightmost-vertex variant of the classic visibility search.
void merge_hole(MergedRing& ring, const std::vector<std::uint32_t>& hole) {
    const std::vector<Vec2>& verts = *ring.vertices;

    std::size_t m_pos = 0;
    for (std::size_t i = 1; i < hole.size(); ++i) {
        const Vec2& p = verts[hole[i]];
        const Vec2& best = verts[hole[m_pos]];
        if (p.x > best.x || (p.x == best.x && p.y > best.y)) m_pos = i;
    }
    const Vec2 m = verts[hole[m_pos]];

    // Closest intersection of the ray m + t*(1,0) with the outer ring.
    double best_x = std::numeric_limits<double>::infinity();
    std::size_t best_edge = SIZE_MAX;
    const std::size_t n = ring.order.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = ring.at(j);
        const Vec2& b = ring.at(i);
        if ((a.y <= m.y) != (b.y <= m.y)) {
            const double x_cross = a.x + (m.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (x_cross >= m.x && x_cross < best_x) {
                best_x = x_cross;
                best_edge = j;
            }
        }
    }
    if (best_edge == SIZE_MAX)
        throw TriangulationFailure("hole is not enclosed by the exterior ring");

    const Vec2 hit{best_x, m.y};
    const std::size_t ea = best_edge;
    const std::size_t eb = (best_edge + 1) % n;
    // Candidate bridge target: the intersected edge endpoint with larger x.
    std::size_t target = ring.at(ea).x > ring.at(eb).x ? ea : eb;

    // A reflex outer vertex inside triangle (m, hit, candidate) would occlude
    // the bridge; among occluders pick the one closest in angle to the +x
    // axis, breaking ties by distance to m.
    const Vec2 p = ring.at(target);
    const Vec2 tri_b = p.y < m.y ? p : hit;   // CCW ordering of (m, hit, p)
    const Vec2 tri_c = p.y < m.y ? hit : p;
    double best_tan = std::numeric_limits<double>::infinity();
    double best_dx = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == target) continue;
        const Vec2& r = ring.at(i);
        if (r == p || r == m) continue;
        const double dx = r.x - m.x;
        if (dx <= 0.0) continue;
        const std::size_t prev = (i + n - 1) % n;
        const std::size_t next = (i + 1) % n;
        if (tri_cross(ring.at(prev), r, ring.at(next)) >= 0.0) continue;  // convex
        if (!in_triangle_inclusive(m, tri_b, tri_c, r)) continue;
        const double tan_angle = std::abs(r.y - m.y) / dx;
        if (tan_angle < best_tan || (tan_angle == best_tan && dx < best_dx)) {
            best_tan = tan_angle;
            best_dx = dx;
            target = i;
        }
    }

    // Splice: ... target, m, hole..., m, target, ...
    std::vector<std::uint32_t> spliced;
    spliced.reserve(n + hole.size() + 2);
    for (std::size_t i = 0; i <= target; ++i) spliced.push_back(ring.order[i]);
    for (std::size_t k = 0; k <= hole.size(); ++k)
        spliced.push_back(hole[(m_pos + k) % hole.size()]);
    for (std::size_t i = target; i < n; ++i) spliced.push_back(ring.order[i]);
    ring.order = std::move(spliced);
}

}  // namespace

CapTriangulation triangulate_cap(const RoiPolygon& poly) {
    CapTriangulation cap;
    cap.vertices = poly.exterior;
    std::vector<std::vector<std::uint32_t>> hole_ids;
    for (const auto& hole : poly.holes) {
        std::vector<std::uint32_t> ids;
        ids.reserve(hole.size());
        for (const Vec2& p : hole) {
            ids.push_back(static_cast<std::uint32_t>(cap.vertices.size()));
            cap.vertices.push_back(p);
        }
        hole_ids.push_back(std::move(ids));
    }

    MergedRing ring;
    ring.vertices = &cap.vertices;
    ring.order.resize(poly.exterior.size());
    for (std::size_t i = 0; i < poly.exterior.size(); ++i)
        ring.order[i] = static_cast<std::uint32_t>(i);

    // Merge holes rightmost-first so earlier bridges cannot block later ones.
    std::vector<std::size_t> hole_order(hole_ids.size());
    for (std::size_t i = 0; i < hole_order.size(); ++i) hole_order[i] = i;
    std::sort(hole_order.begin(), hole_order.end(), [&](std::size_t lhs, std::size_t rhs) {
        double max_lhs = -std::numeric_limits<double>::infinity();
        double max_rhs = -std::numeric_limits<double>::infinity();
        for (auto id : hole_ids[lhs]) max_lhs = std::max(max_lhs, cap.vertices[id].x);
        for (auto id : hole_ids[rhs]) max_rhs = std::max(max_rhs, cap.vertices[id].x);
        if (max_lhs != max_rhs) return max_lhs > max_rhs;
        return lhs < rhs;
    });
    for (std::size_t h : hole_order) merge_hole(ring, hole_ids[h]);

    // Ear clipping over the merged ring.
    std::vector<std::uint32_t> rem = ring.order;
    const auto v = [&](std::size_t i) -> const Vec2& { return cap.vertices[rem[i]]; };

    const auto is_ear = [&](std::size_t i, bool allow_flat) {
        const std::size_t n = rem.size();
        const std::size_t ip = (i + n - 1) % n;
        const std::size_t in = (i + 1) % n;
        const double corner = tri_cross(v(ip), v(i), v(in));
        if (allow_flat ? corner < 0.0 : corner <= 0.0) return false;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == ip || k == i || k == in) continue;
            const Vec2& w = v(k);
            if (w == v(ip) || w == v(i) || w == v(in)) continue;
            if (corner > 0.0 && in_triangle_inclusive(v(ip), v(i), v(in), w)) return false;
        }
        return true;
    };

    std::size_t cursor = 0;
    while (rem.size() > 3) {
        const std::size_t n = rem.size();
        std::size_t found = SIZE_MAX;
        for (std::size_t step = 0; step < n && found == SIZE_MAX; ++step) {
            const std::size_t i = (cursor + step) % n;
            if (is_ear(i, false)) found = i;
        }
        for (std::size_t step = 0; step < n && found == SIZE_MAX; ++step) {
            const std::size_t i = (cursor + step) % n;
            if (is_ear(i, true)) found = i;
        }
        if (found == SIZE_MAX)
            throw TriangulationFailure("no ear found; ring is likely self-intersecting");
        const std::size_t ip = (found + n - 1) % n;
        const std::size_t in = (found + 1) % n;
        cap.triangles.push_back({rem[ip], rem[found], rem[in]});
        rem.erase(rem.begin() + static_cast<std::ptrdiff_t>(found));
        cursor = found % rem.size();
    }
    // A simple CCW input can only leave a CCW (or collapsed) remainder; an
    // inverted one means the ring crossed itself.
    if (tri_cross(v(0), v(1), v(2)) < 0.0)
        throw TriangulationFailure("inverted remainder; ring is likely self-intersecting");
    cap.triangles.push_back({rem[0], rem[1], rem[2]});
    return cap;
}

}  // namespace roverlay
