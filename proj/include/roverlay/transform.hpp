#pragma once

#include <array>
#include <cmath>

#include "roverlay/errors.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Planar affine map between world ground coordinates (x, z) and the GeoJSON
// coordinate reference system (u, v):
//
//   u = a*x + b*z + tx
//   v = c*x + d*z + ty
//
// The linear part must be invertible (|det| > 1e-12).
struct WorldCrsTransform {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;
    double tx = 0.0, ty = 0.0;

    static WorldCrsTransform from_coeffs(const std::array<double, 6>& m) {
        WorldCrsTransform t{m[0], m[1], m[2], m[3], m[4], m[5]};
        if (!t.invertible())
            throw InvalidTransform("world<->CRS transform is not invertible (|det| <= 1e-12)");
        return t;
    }

    static WorldCrsTransform identity() { return {}; }

    double det() const { return a * d - b * c; }
    bool invertible() const { return std::abs(det()) > 1e-12; }

    // world (x, z) -> CRS (u, v)
    Vec2 crs_from_world(const Vec2& world_xz) const {
        return {a * world_xz.x + b * world_xz.y + tx, c * world_xz.x + d * world_xz.y + ty};
    }

    // CRS (u, v) -> world (x, z)
    Vec2 world_from_crs(const Vec2& crs) const {
        const double inv_det = 1.0 / det();
        const double du = crs.x - tx;
        const double dv = crs.y - ty;
        return {(d * du - b * dv) * inv_det, (-c * du + a * dv) * inv_det};
    }
};

}  // namespace roverlay
