#include "roverlay/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roverlay/errors.hpp"
#include "roverlay/parallel.hpp"
#include "roverlay/rng.hpp"

namespace roverlay {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Lattice value in [0, 1), fully determined by (seed, octave, cell).
double lattice_value(std::uint64_t seed, int octave, std::int64_t xi, std::int64_t zi) {
    std::uint64_t h = seed;
    h = mix64(h ^ (static_cast<std::uint64_t>(octave) * 0xA24BAED4963EE407ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(xi) * 0x9FB21C651E98DF25ull));
    h = mix64(h ^ (static_cast<std::uint64_t>(zi) * 0xD6E8FEB86659FD93ull));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double value_noise(std::uint64_t seed, int octave, double x, double z) {
    const double fx = std::floor(x);
    const double fz = std::floor(z);
    const auto xi = static_cast<std::int64_t>(fx);
    const auto zi = static_cast<std::int64_t>(fz);
    const double tx = fade(x - fx);
    const double tz = fade(z - fz);
    const double v00 = lattice_value(seed, octave, xi, zi);
    const double v10 = lattice_value(seed, octave, xi + 1, zi);
    const double v01 = lattice_value(seed, octave, xi, zi + 1);
    const double v11 = lattice_value(seed, octave, xi + 1, zi + 1);
    const double a = v00 + (v10 - v00) * tx;
    const double b = v01 + (v11 - v01) * tx;
    return a + (b - a) * tz;
}

}  // namespace

double Heightfield::max_abs_height() const {
    double m = 0.0;
    for (double h : heights) m = std::max(m, std::abs(h));
    return m;
}

Vec3 Heightfield::normal_at(int i, int j) const {
    const int il = std::max(i - 1, 0), ir = std::min(i + 1, nx - 1);
    const int jl = std::max(j - 1, 0), jr = std::min(j + 1, nz - 1);
    const double dx = (height_at(ir, j) - height_at(il, j)) / ((ir - il) * cell_size);
    const double dz = (height_at(i, jr) - height_at(i, jl)) / ((jr - jl) * cell_size);
    return normalized(Vec3{-dx, 1.0, -dz});
}

Heightfield procedural_heightfield(std::uint64_t seed, int nx, int nz, double cell_size,
                                   double amplitude, int octaves, double base_wavelength_cells) {
    if (nx < 2 || nz < 2) throw Error("heightfield needs at least a 2x2 grid");
    Heightfield hf;
    hf.nx = nx;
    hf.nz = nz;
    hf.cell_size = cell_size;
    hf.heights.resize(static_cast<std::size_t>(nx) * nz);
    for (int j = 0; j < nz; ++j) {
        for (int i = 0; i < nx; ++i) {
            double value = 0.0;
            double amp = 1.0;
            double freq = 1.0 / base_wavelength_cells;
            double norm = 0.0;
            for (int o = 0; o < octaves; ++o) {
                value += amp * (2.0 * value_noise(seed, o, i * freq, j * freq) - 1.0);
                norm += amp;
                amp *= 0.5;
                freq *= 2.0;
            }
            hf.heights[static_cast<std::size_t>(j) * nx + i] = amplitude * value / norm;
        }
    }
    return hf;
}

Heightfield heightfield_from_gray16(const Gray16Image& img, double cell_size, double height_scale,
                                    double height_offset) {
    if (img.width < 2 || img.height < 2) throw Error("heightfield PNG must be at least 2x2");
    Heightfield hf;
    hf.nx = img.width;
    hf.nz = img.height;
    hf.cell_size = cell_size;
    hf.heights.resize(img.px.size());
    for (std::size_t i = 0; i < img.px.size(); ++i)
        hf.heights[i] = height_offset + height_scale * (img.px[i] / 65535.0);
    return hf;
}

Camera::Basis Camera::basis() const {
    const Vec3 f = normalized(forward);
    const Vec3 side = cross(f, up);
    if (length(side) < 1e-9) throw Error("camera forward is parallel to up");
    const Vec3 r = normalized(side);
    return {r, cross(r, f), f};
}

Camera Camera::look_at(const Vec3& position, const Vec3& target, double vfov_deg, double aspect,
                       const Vec3& up) {
    Camera cam;
    cam.position = position;
    cam.forward = normalized(target - position);
    cam.up = up;
    cam.vfov_deg = vfov_deg;
    cam.aspect = aspect;
    return cam;
}

std::optional<ProjectedPoint> project(const Camera& cam, int width, int height, const Vec3& p) {
    const Camera::Basis b = cam.basis();
    const Vec3 d = p - cam.position;
    const double zc = dot(d, b.forward);
    if (zc < cam.near_clip) return std::nullopt;
    const double tan_half = std::tan(cam.vfov_deg * 0.5 * kPi / 180.0);
    const double ndc_x = dot(d, b.right) / (zc * tan_half * cam.aspect);
    const double ndc_y = dot(d, b.up) / (zc * tan_half);
    return ProjectedPoint{(ndc_x + 1.0) * 0.5 * width, (1.0 - ndc_y) * 0.5 * height, zc};
}

Vec3 unproject(const Camera& cam, int width, int height, double px, double py, double depth) {
    const Camera::Basis b = cam.basis();
    const double tan_half = std::tan(cam.vfov_deg * 0.5 * kPi / 180.0);
    const double ndc_x = px / (0.5 * width) - 1.0;
    const double ndc_y = 1.0 - py / (0.5 * height);
    return cam.position + b.right * (ndc_x * tan_half * cam.aspect * depth) +
           b.up * (ndc_y * tan_half * depth) + b.forward * depth;
}

namespace {

// Projected vertices snap to 1/256 px so shared-edge edge functions evaluate
// exactly; with <= 4096 px targets the products stay within 53 bits.
double snap(double v) { return std::round(v * 256.0) / 256.0; }

struct ClipVertex {
    Vec3 world;
    Vec3 normal;
    double zc = 0.0;  // camera-space depth
    Vec3 cam;         // camera-space position
};

struct RasterTriangle {
    double px[3], py[3];
    double inv_z[3];
    Vec3 world_over_z[3];
    Vec3 normal_over_z[3];
    Color3f albedo;
    Layer layer;
    double area2 = 0.0;
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
};

struct RasterContext {
    const Camera* cam = nullptr;
    Camera::Basis basis;
    double tan_half = 0.0;
    int width = 0, height = 0;
    std::vector<RasterTriangle> triangles;
};

void emit_projected(RasterContext& ctx, const ClipVertex v[3], const Color3f& albedo,
                    Layer layer) {
    RasterTriangle tri;
    for (int i = 0; i < 3; ++i) {
        const double zc = v[i].zc;
        const double ndc_x = v[i].cam.x / (zc * ctx.tan_half * ctx.cam->aspect);
        const double ndc_y = v[i].cam.y / (zc * ctx.tan_half);
        tri.px[i] = snap((ndc_x + 1.0) * 0.5 * ctx.width);
        tri.py[i] = snap((1.0 - ndc_y) * 0.5 * ctx.height);
        tri.inv_z[i] = 1.0 / zc;
        tri.world_over_z[i] = v[i].world * tri.inv_z[i];
        tri.normal_over_z[i] = v[i].normal * tri.inv_z[i];
    }
    double area2 = (tri.px[1] - tri.px[0]) * (tri.py[2] - tri.py[0]) -
                   (tri.py[1] - tri.py[0]) * (tri.px[2] - tri.px[0]);
    if (area2 == 0.0) return;
    if (area2 < 0.0) {
        std::swap(tri.px[1], tri.px[2]);
        std::swap(tri.py[1], tri.py[2]);
        std::swap(tri.inv_z[1], tri.inv_z[2]);
        std::swap(tri.world_over_z[1], tri.world_over_z[2]);
        std::swap(tri.normal_over_z[1], tri.normal_over_z[2]);
        area2 = -area2;
    }
    tri.area2 = area2;
    tri.albedo = albedo;
    tri.layer = layer;
    const double min_px = std::min({tri.px[0], tri.px[1], tri.px[2]});
    const double max_px = std::max({tri.px[0], tri.px[1], tri.px[2]});
    const double min_py = std::min({tri.py[0], tri.py[1], tri.py[2]});
    const double max_py = std::max({tri.py[0], tri.py[1], tri.py[2]});
    tri.min_x = std::max(0, static_cast<int>(std::floor(min_px - 0.5)));
    tri.max_x = std::min(ctx.width - 1, static_cast<int>(std::ceil(max_px)));
    tri.min_y = std::max(0, static_cast<int>(std::floor(min_py - 0.5)));
    tri.max_y = std::min(ctx.height - 1, static_cast<int>(std::ceil(max_py)));
    if (tri.min_x > tri.max_x || tri.min_y > tri.max_y) return;
    ctx.triangles.push_back(tri);
}

// Near-plane clip in camera space, then fan triangulation.
void submit_triangle(RasterContext& ctx, const Vec3 world[3], const Vec3 normal[3],
                     const Color3f& albedo, Layer layer) {
    ClipVertex in[3];
    for (int i = 0; i < 3; ++i) {
        const Vec3 d = world[i] - ctx.cam->position;
        in[i].world = world[i];
        in[i].normal = normal[i];
        in[i].cam = {dot(d, ctx.basis.right), dot(d, ctx.basis.up), dot(d, ctx.basis.forward)};
        in[i].zc = in[i].cam.z;
    }
    const double near = ctx.cam->near_clip;
    ClipVertex out[4];
    int n_out = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& a = in[i];
        const ClipVertex& b = in[(i + 1) % 3];
        const bool a_in = a.zc >= near;
        const bool b_in = b.zc >= near;
        if (a_in) out[n_out++] = a;
        if (a_in != b_in) {
            const double t = (near - a.zc) / (b.zc - a.zc);
            ClipVertex v;
            v.world = a.world + (b.world - a.world) * t;
            v.normal = a.normal + (b.normal - a.normal) * t;
            v.cam = a.cam + (b.cam - a.cam) * t;
            v.zc = near;
            v.cam.z = near;
            out[n_out++] = v;
        }
    }
    if (n_out < 3) return;
    for (int k = 1; k + 1 < n_out; ++k) {
        const ClipVertex fan[3] = {out[0], out[k], out[k + 1]};
        emit_projected(ctx, fan, albedo, layer);
    }
}

// Top-left ownership for boundary pixels: left edges run upward in pixel
// space, top edges run rightward.
bool edge_owned(double ax, double ay, double bx, double by) {
    if (ay != by) return ay > by;
    return ax < bx;
}

void raster_band(const RasterContext& ctx, GBuffer& g, int y_begin, int y_end) {
    for (const RasterTriangle& tri : ctx.triangles) {
        const int y0 = std::max(tri.min_y, y_begin);
        const int y1 = std::min(tri.max_y, y_end - 1);
        if (y0 > y1) continue;
        double ex[3], ey[3];  // edge deltas: E_k is the edge opposite vertex k
        double owned[3];
        for (int k = 0; k < 3; ++k) {
            const int a = (k + 1) % 3;
            const int b = (k + 2) % 3;
            ex[k] = tri.py[b] - tri.py[a];
            ey[k] = tri.px[b] - tri.px[a];
            owned[k] = edge_owned(tri.px[a], tri.py[a], tri.px[b], tri.py[b]) ? 1.0 : 0.0;
        }
        for (int y = y0; y <= y1; ++y) {
            const double cy = y + 0.5;
            for (int x = tri.min_x; x <= tri.max_x; ++x) {
                const double cx = x + 0.5;
                double lambda[3];
                bool inside = true;
                for (int k = 0; k < 3 && inside; ++k) {
                    const int a = (k + 1) % 3;
                    const double e = ey[k] * (cy - tri.py[a]) - ex[k] * (cx - tri.px[a]);
                    if (e > 0.0 || (e == 0.0 && owned[k] != 0.0))
                        lambda[k] = e;
                    else
                        inside = false;
                }
                if (!inside) continue;
                const double inv_area = 1.0 / tri.area2;
                const double l0 = lambda[0] * inv_area;
                const double l1 = lambda[1] * inv_area;
                const double l2 = lambda[2] * inv_area;
                const double inv_z = l0 * tri.inv_z[0] + l1 * tri.inv_z[1] + l2 * tri.inv_z[2];
                const double depth = 1.0 / inv_z;
                const std::size_t idx = g.index(x, y);
                if (depth >= g.depth[idx]) continue;
                g.depth[idx] = depth;
                const Vec3 w = (tri.world_over_z[0] * l0 + tri.world_over_z[1] * l1 +
                                tri.world_over_z[2] * l2) *
                               depth;
                const Vec3 n = (tri.normal_over_z[0] * l0 + tri.normal_over_z[1] * l1 +
                                tri.normal_over_z[2] * l2) *
                               depth;
                g.world[idx] = w;
                g.normal[idx] = normalized(n);
                g.albedo[idx] = tri.albedo;
                g.layer[idx] = tri.layer;
            }
        }
    }
}

}  // namespace

GBuffer rasterize_scene(const Heightfield& terrain, const std::vector<SceneMesh>& objects,
                        const Camera& cam, int width, int height, const Color3f& terrain_albedo,
                        int threads) {
    if (width < 1 || height < 1) throw Error("render resolution must be at least 1x1");
    GBuffer g;
    g.width = width;
    g.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    g.depth.assign(n, kInfinity);
    g.world.assign(n, Vec3{});
    g.normal.assign(n, Vec3{});
    g.albedo.assign(n, Color3f{});
    g.layer.assign(n, Layer::sky);

    RasterContext ctx;
    ctx.cam = &cam;
    ctx.basis = cam.basis();
    ctx.tan_half = std::tan(cam.vfov_deg * 0.5 * kPi / 180.0);
    ctx.width = width;
    ctx.height = height;
    ctx.triangles.reserve(static_cast<std::size_t>(terrain.nx) * terrain.nz * 2);

    std::vector<Vec3> vertex_normals(static_cast<std::size_t>(terrain.nx) * terrain.nz);
    for (int j = 0; j < terrain.nz; ++j)
        for (int i = 0; i < terrain.nx; ++i)
            vertex_normals[static_cast<std::size_t>(j) * terrain.nx + i] = terrain.normal_at(i, j);
    const auto vn = [&](int i, int j) {
        return vertex_normals[static_cast<std::size_t>(j) * terrain.nx + i];
    };

    for (int j = 0; j + 1 < terrain.nz; ++j) {
        for (int i = 0; i + 1 < terrain.nx; ++i) {
            const Vec3 w00 = terrain.vertex(i, j), w10 = terrain.vertex(i + 1, j);
            const Vec3 w01 = terrain.vertex(i, j + 1), w11 = terrain.vertex(i + 1, j + 1);
            const Vec3 n00 = vn(i, j), n10 = vn(i + 1, j);
            const Vec3 n01 = vn(i, j + 1), n11 = vn(i + 1, j + 1);
            const Vec3 tri_a[3] = {w00, w10, w11};
            const Vec3 nrm_a[3] = {n00, n10, n11};
            submit_triangle(ctx, tri_a, nrm_a, terrain_albedo, Layer::terrain);
            const Vec3 tri_b[3] = {w00, w11, w01};
            const Vec3 nrm_b[3] = {n00, n11, n01};
            submit_triangle(ctx, tri_b, nrm_b, terrain_albedo, Layer::terrain);
        }
    }
    for (const SceneMesh& mesh : objects) {
        for (const auto& tri : mesh.triangles) {
            const Vec3 w[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                               mesh.vertices[tri[2]]};
            const Vec3 nr[3] = {mesh.normals[tri[0]], mesh.normals[tri[1]],
                                mesh.normals[tri[2]]};
            submit_triangle(ctx, w, nr, mesh.albedo, mesh.layer);
        }
    }

    parallel_rows(height, threads, [&](int y0, int y1) { raster_band(ctx, g, y0, y1); });
    return g;
}

RgbImage shade_base(const GBuffer& g, const SunLight& sun, int threads) {
    RgbImage img;
    img.width = g.width;
    img.height = g.height;
    img.px.resize(static_cast<std::size_t>(g.width) * g.height * 3);
    const Vec3 sun_dir = normalized(sun.direction);
    parallel_rows(g.height, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < g.width; ++x) {
                const std::size_t idx = g.index(x, y);
                float* out = img.px.data() + 3 * idx;
                if (g.layer[idx] == Layer::sky) {
                    out[0] = sun.sky_color.r;
                    out[1] = sun.sky_color.g;
                    out[2] = sun.sky_color.b;
                    continue;
                }
                const double lambert = std::max(0.0, dot(g.normal[idx], -sun_dir));
                const double lit = sun.ambient + sun.intensity * lambert;
                out[0] = static_cast<float>(g.albedo[idx].r * lit);
                out[1] = static_cast<float>(g.albedo[idx].g * lit);
                out[2] = static_cast<float>(g.albedo[idx].b * lit);
            }
        }
    });
    return img;
}

SceneMesh make_cone(const Vec3& base_center, double radius, double height, int segments,
                    const Color3f& albedo) {
    SceneMesh mesh;
    mesh.albedo = albedo;
    const Vec3 apex = base_center + Vec3{0.0, height, 0.0};
    const auto rim = [&](int k) {
        const double theta = 2.0 * kPi * k / segments;
        return base_center + Vec3{radius * std::cos(theta), 0.0, radius * std::sin(theta)};
    };
    for (int k = 0; k < segments; ++k) {
        const Vec3 p0 = rim(k);
        const Vec3 p1 = rim(k + 1 == segments ? 0 : k + 1);
        const Vec3 n = normalized(cross(apex - p0, p1 - p0));
        const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.insert(mesh.vertices.end(), {p0, apex, p1});
        mesh.normals.insert(mesh.normals.end(), {n, n, n});
        mesh.triangles.push_back({base, base + 1, base + 2});
        // base disk wedge
        const Vec3 dn{0.0, -1.0, 0.0};
        const auto disk = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.insert(mesh.vertices.end(), {base_center, p1, p0});
        mesh.normals.insert(mesh.normals.end(), {dn, dn, dn});
        mesh.triangles.push_back({disk, disk + 1, disk + 2});
    }
    return mesh;
}

SceneMesh make_box(const Vec3& lo, const Vec3& hi, const Color3f& albedo) {
    SceneMesh mesh;
    mesh.albedo = albedo;
    const auto add_face = [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                              const Vec3& n) {
        const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.insert(mesh.vertices.end(), {a, b, c, d});
        mesh.normals.insert(mesh.normals.end(), {n, n, n, n});
        mesh.triangles.push_back({base, base + 1, base + 2});
        mesh.triangles.push_back({base, base + 2, base + 3});
    };
    add_face({lo.x, lo.y, lo.z}, {hi.x, lo.y, lo.z}, {hi.x, hi.y, lo.z}, {lo.x, hi.y, lo.z},
             {0, 0, -1});
    add_face({hi.x, lo.y, hi.z}, {lo.x, lo.y, hi.z}, {lo.x, hi.y, hi.z}, {hi.x, hi.y, hi.z},
             {0, 0, 1});
    add_face({lo.x, lo.y, hi.z}, {lo.x, lo.y, lo.z}, {lo.x, hi.y, lo.z}, {lo.x, hi.y, hi.z},
             {-1, 0, 0});
    add_face({hi.x, lo.y, lo.z}, {hi.x, lo.y, hi.z}, {hi.x, hi.y, hi.z}, {hi.x, hi.y, lo.z},
             {1, 0, 0});
    add_face({lo.x, hi.y, lo.z}, {hi.x, hi.y, lo.z}, {hi.x, hi.y, hi.z}, {lo.x, hi.y, hi.z},
             {0, 1, 0});
    add_face({lo.x, lo.y, hi.z}, {hi.x, lo.y, hi.z}, {hi.x, lo.y, lo.z}, {lo.x, lo.y, lo.z},
             {0, -1, 0});
    return mesh;
}

}  // namespace roverlay
