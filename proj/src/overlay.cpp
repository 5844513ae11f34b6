#include "roverlay/overlay.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "roverlay/errors.hpp"
#include "roverlay/parallel.hpp"

namespace roverlay {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

Camera::Basis Projector::basis() const {
    const Vec3 f = normalized(forward);
    const Vec3 side = cross(f, up);
    if (length(side) < 1e-9) throw Error("projector forward is parallel to up");
    const Vec3 r = normalized(side);
    return {r, cross(r, f), f};
}

Projector Projector::top_down_ortho(const CrsRect& window, double altitude, double depth_range) {
    Projector proj;
    proj.position = {window.min.x + window.width() * 0.5, altitude,
                     window.min.y + window.height() * 0.5};
    proj.forward = {0.0, -1.0, 0.0};
    proj.up = {0.0, 0.0, -1.0};
    proj.orthographic = true;
    proj.half_width = window.width() * 0.5;
    proj.half_height = window.height() * 0.5;
    proj.near_clip = 0.0;
    proj.far_clip = altitude + depth_range;
    return proj;
}

std::optional<Vec2> decal_uv(const Projector& proj, const Vec3& p) {
    const Camera::Basis b = proj.basis();
    const Vec3 d = p - proj.position;
    const double zc = dot(d, b.forward);
    if (zc < proj.near_clip || zc > proj.far_clip) return std::nullopt;
    double u, v;
    if (proj.orthographic) {
        u = 0.5 + 0.5 * dot(d, b.right) / proj.half_width;
        v = 0.5 - 0.5 * dot(d, b.up) / proj.half_height;
    } else {
        if (zc <= 0.0) return std::nullopt;
        const double tan_half = std::tan(proj.vfov_deg * 0.5 * kPi / 180.0);
        u = 0.5 + 0.5 * dot(d, b.right) / (zc * tan_half * proj.aspect);
        v = 0.5 - 0.5 * dot(d, b.up) / (zc * tan_half);
    }
    if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) return std::nullopt;
    return Vec2{u, v};
}

namespace {

struct TriData {
    Vec3 v0, e1, e2;
    Vec3 plane_n;  // cross(e1, e2), unnormalized
};

struct PreparedMesh {
    std::uint32_t region_id = 0;
    std::vector<TriData> tris;
    Vec3 aabb_min, aabb_max;
    int min_x = 0, max_x = -1, min_y = 0, max_y = -1;  // screen bbox
};

struct CrossingCount {
    int count = 0;
    bool clean = true;
};

// Parity epsilon: a crossing landing exactly on the fragment still counts.
constexpr double kEndpointEps = 1e-7;
// Relative margins below which a hit decision is too close to call.
constexpr double kBoundaryEps = 1e-9;

CrossingCount count_crossings(const PreparedMesh& mesh, const Vec3& origin, const Vec3& target) {
    const Vec3 dir = target - origin;
    CrossingCount result;

    // Slab prefilter against the mesh box.
    double t_enter = 0.0, t_exit = 1.0 + kEndpointEps;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double dd[3] = {dir.x, dir.y, dir.z};
    const double lo[3] = {mesh.aabb_min.x, mesh.aabb_min.y, mesh.aabb_min.z};
    const double hi[3] = {mesh.aabb_max.x, mesh.aabb_max.y, mesh.aabb_max.z};
    for (int axis = 0; axis < 3; ++axis) {
        if (dd[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) return result;
            continue;
        }
        double t0 = (lo[axis] - o[axis]) / dd[axis];
        double t1 = (hi[axis] - o[axis]) / dd[axis];
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) return result;
    }

    const double dir_len = length(dir);
    for (const TriData& tri : mesh.tris) {
        const Vec3 pvec = cross(dir, tri.e2);
        const double det = dot(tri.e1, pvec);
        const double parallel_eps = 1e-12 * dir_len * length(tri.plane_n);
        if (std::abs(det) <= parallel_eps) {
            // Near-parallel: safe to skip only when both endpoints sit
            // strictly on one side of the triangle plane.
            const double plane_len = length(tri.plane_n);
            const double d0 = dot(origin - tri.v0, tri.plane_n);
            const double d1 = dot(target - tri.v0, tri.plane_n);
            const double margin = 1e-9 * plane_len;
            if (!(d0 * d1 > 0.0 && std::abs(d0) > margin && std::abs(d1) > margin))
                result.clean = false;
            continue;
        }
        const double inv_det = 1.0 / det;
        const Vec3 tvec = origin - tri.v0;
        const double u = dot(tvec, pvec) * inv_det;
        const Vec3 qvec = cross(tvec, tri.e1);
        const double v = dot(dir, qvec) * inv_det;
        const double w = 1.0 - u - v;
        const double t = dot(tri.e2, qvec) * inv_det;
        const bool hit = u >= 0.0 && v >= 0.0 && w >= 0.0 && t > 0.0 && t <= 1.0 + kEndpointEps;
        if (std::abs(u) <= kBoundaryEps || std::abs(v) <= kBoundaryEps ||
            std::abs(w) <= kBoundaryEps || std::abs(t) <= kBoundaryEps ||
            std::abs(t - (1.0 + kEndpointEps)) <= kBoundaryEps)
            result.clean = false;
        if (hit) ++result.count;
    }
    return result;
}

// Deterministic fallback for grazing segments: recount from a slightly moved
// origin until the decision is unambiguous.
int robust_parity(const PreparedMesh& mesh, const Vec3& origin, const Vec3& target,
                  double jitter_scale) {
    CrossingCount res = count_crossings(mesh, origin, target);
    if (res.clean) return res.count & 1;
    static const Vec3 kJitters[3] = {{0.7312, 0.1766, 0.4589},
                                     {-0.3981, 0.8123, -0.2207},
                                     {0.1439, -0.5521, 0.9043}};
    for (const Vec3& j : kJitters) {
        const CrossingCount retry =
            count_crossings(mesh, origin + j * jitter_scale, target);
        if (retry.clean) return retry.count & 1;
    }
    return res.count & 1;
}

PreparedMesh prepare_mesh(const ShapeMesh& mesh, const Camera& cam, int width, int height) {
    PreparedMesh prep;
    prep.region_id = mesh.region_id;
    prep.tris.reserve(mesh.triangles.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    prep.aabb_min = {inf, inf, inf};
    prep.aabb_max = {-inf, -inf, -inf};
    for (const Vec3& v : mesh.vertices) {
        prep.aabb_min = {std::min(prep.aabb_min.x, v.x), std::min(prep.aabb_min.y, v.y),
                         std::min(prep.aabb_min.z, v.z)};
        prep.aabb_max = {std::max(prep.aabb_max.x, v.x), std::max(prep.aabb_max.y, v.y),
                         std::max(prep.aabb_max.z, v.z)};
    }
    for (const auto& tri : mesh.triangles) {
        TriData data;
        data.v0 = mesh.vertices[tri[0]];
        data.e1 = mesh.vertices[tri[1]] - data.v0;
        data.e2 = mesh.vertices[tri[2]] - data.v0;
        data.plane_n = cross(data.e1, data.e2);
        prep.tris.push_back(data);
    }

    // Conservative screen bounds; a vertex behind the near plane makes the
    // whole screen a candidate.
    double min_px = inf, max_px = -inf, min_py = inf, max_py = -inf;
    bool full_screen = false;
    for (const Vec3& v : mesh.vertices) {
        const auto p = project(cam, width, height, v);
        if (!p) {
            full_screen = true;
            break;
        }
        min_px = std::min(min_px, p->px);
        max_px = std::max(max_px, p->px);
        min_py = std::min(min_py, p->py);
        max_py = std::max(max_py, p->py);
    }
    if (full_screen) {
        prep.min_x = 0;
        prep.max_x = width - 1;
        prep.min_y = 0;
        prep.max_y = height - 1;
    } else {
        prep.min_x = std::max(0, static_cast<int>(std::floor(min_px)) - 1);
        prep.max_x = std::min(width - 1, static_cast<int>(std::ceil(max_px)) + 1);
        prep.min_y = std::max(0, static_cast<int>(std::floor(min_py)) - 1);
        prep.max_y = std::min(height - 1, static_cast<int>(std::ceil(max_py)) + 1);
    }
    return prep;
}

}  // namespace

OverlayMask csg_mask(const GBuffer& g, const std::vector<ShapeMesh>& meshes, const Camera& cam,
                     int threads) {
    OverlayMask mask;
    mask.width = g.width;
    mask.height = g.height;
    mask.ids.assign(static_cast<std::size_t>(g.width) * g.height, 0);

    std::vector<PreparedMesh> prepared;
    prepared.reserve(meshes.size());
    for (const ShapeMesh& mesh : meshes) {
        if (!is_closed_manifold(mesh))
            throw OpenMesh("shape mesh for region " + std::to_string(mesh.region_id) +
                           " is not a closed manifold; parity is undefined");
        prepared.push_back(prepare_mesh(mesh, cam, g.width, g.height));
    }
    for (const PreparedMesh& prep : prepared) {
        const Vec3 diag = prep.aabb_max - prep.aabb_min;
        const Vec3 probe = prep.aabb_max + diag + Vec3{1.0, 2.0, 3.0};
        const double jitter = (length(diag) + 1.0) * 1e-7;
        if (robust_parity(prep, cam.position, probe, jitter) != 0)
            throw Error("camera is inside the shape mesh of region " +
                        std::to_string(prep.region_id));
    }

    for (const PreparedMesh& prep : prepared) {
        if (prep.min_x > prep.max_x || prep.min_y > prep.max_y) continue;
        const double jitter = (length(prep.aabb_max - prep.aabb_min) + 1.0) * 1e-7;
        parallel_rows(g.height, threads, [&](int y0, int y1) {
            const int row_begin = std::max(y0, prep.min_y);
            const int row_end = std::min(y1 - 1, prep.max_y);
            for (int y = row_begin; y <= row_end; ++y) {
                for (int x = prep.min_x; x <= prep.max_x; ++x) {
                    const std::size_t idx = g.index(x, y);
                    if (g.layer[idx] == Layer::sky) continue;
                    if (robust_parity(prep, cam.position, g.world[idx], jitter) != 0)
                        mask.ids[idx] = prep.region_id;
                }
            }
        });
    }
    return mask;
}

DecalTexture make_decal_texture(const RoiTexture& roi, const RgbaImage8& styled) {
    if (styled.width != roi.width || styled.height != roi.height)
        throw DimensionMismatch("style texture does not match the RoI texture grid");
    DecalTexture tex;
    tex.width = roi.width;
    tex.height = roi.height;
    tex.crs_window = roi.crs_window;
    tex.rgba = styled.px;
    tex.ids = roi.ids;
    return tex;
}

OverlayMask apply_decal(const GBuffer& g, const Projector& proj, const DecalTexture& baked,
                        const LayerFilter& filter, int threads) {
    if (baked.width < 1 || baked.height < 1 || baked.rgba.empty())
        throw Error("decal texture is empty");
    OverlayMask mask;
    mask.width = g.width;
    mask.height = g.height;
    mask.ids.assign(static_cast<std::size_t>(g.width) * g.height, 0);
    mask.rgba.assign(static_cast<std::size_t>(g.width) * g.height * 4, 0);

    parallel_rows(g.height, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < g.width; ++x) {
                const std::size_t idx = g.index(x, y);
                if (g.layer[idx] == Layer::sky || !filter.passes(g.layer[idx])) continue;
                const auto uv = decal_uv(proj, g.world[idx]);
                if (!uv) continue;
                const int tx = std::clamp(static_cast<int>(std::floor(uv->x * baked.width)), 0,
                                          baked.width - 1);
                const int ty = std::clamp(static_cast<int>(std::floor(uv->y * baked.height)), 0,
                                          baked.height - 1);
                const std::size_t tex_idx = static_cast<std::size_t>(ty) * baked.width + tx;
                const std::uint8_t* sample = baked.rgba.data() + 4 * tex_idx;
                if (sample[3] == 0) continue;
                mask.ids[idx] = baked.ids[tex_idx];
                std::uint8_t* out = mask.rgba.data() + 4 * idx;
                out[0] = sample[0];
                out[1] = sample[1];
                out[2] = sample[2];
                out[3] = sample[3];
            }
        }
    });
    return mask;
}

OverlayMask pps_lookup(const GBuffer& g, const WorldCrsTransform& transform,
                       const RoiTexture& roi, PpsStats* stats, int threads) {
    if (!transform.invertible()) throw InvalidTransform("world<->CRS transform is singular");
    OverlayMask mask;
    mask.width = g.width;
    mask.height = g.height;
    mask.ids.assign(static_cast<std::size_t>(g.width) * g.height, 0);

    const CrsRect win = roi.crs_window;
    const double du = win.width() / roi.width;
    const double dv = win.height() / roi.height;
    std::atomic<std::uint64_t> fetches{0};

    parallel_rows(g.height, threads, [&](int y0, int y1) {
        std::uint64_t local_fetches = 0;
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < g.width; ++x) {
                const std::size_t idx = g.index(x, y);
                const Vec3& w = g.world[idx];
                const Vec2 crs = transform.crs_from_world({w.x, w.z});
                const int tx = std::clamp(
                    static_cast<int>(std::floor((crs.x - win.min.x) / du)), 0, roi.width - 1);
                const int ty = std::clamp(
                    static_cast<int>(std::floor((crs.y - win.min.y) / dv)), 0, roi.height - 1);
                // One unconditional fetch per pixel; validity only masks it.
                const std::uint32_t id = roi.ids[static_cast<std::size_t>(ty) * roi.width + tx];
                ++local_fetches;
                const bool valid = g.layer[idx] != Layer::sky && win.contains(crs);
                mask.ids[idx] = valid ? id : 0;
            }
        }
        fetches += local_fetches;
    });
    if (stats) stats->texture_fetches += fetches.load();
    return mask;
}

}  // namespace roverlay
