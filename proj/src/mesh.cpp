#include "roverlay/mesh.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "roverlay/errors.hpp"
#include "roverlay/polygon.hpp"

namespace roverlay {

bool is_closed_manifold(const ShapeMesh& mesh) {
    if (mesh.triangles.empty()) return false;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& tri : mesh.triangles) {
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0]) return false;
        for (int e = 0; e < 3; ++e) {
            const std::uint32_t a = tri[e];
            const std::uint32_t b = tri[(e + 1) % 3];
            if (a >= mesh.vertices.size() || b >= mesh.vertices.size()) return false;
            if (++directed[{a, b}] > 1) return false;  // same directed edge twice
        }
    }
    for (const auto& [edge, count] : directed) {
        auto opposite = directed.find({edge.second, edge.first});
        if (opposite == directed.end()) return false;
    }
    return true;
}

double signed_volume(const ShapeMesh& mesh) {
    double volume = 0.0;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        volume += dot(a, cross(b, c));
    }
    return volume / 6.0;
}

ShapeMesh extrude_polygon(const RoiPolygon& poly, const WorldCrsTransform& transform,
                          double half_height) {
    if (!(half_height > 0.0)) throw Error("extrusion half height must be positive");
    const CapTriangulation cap = triangulate_cap(poly);

    ShapeMesh mesh;
    mesh.region_id = poly.region_id;
    const std::uint32_t n = static_cast<std::uint32_t>(cap.vertices.size());
    mesh.vertices.reserve(2 * n);
    for (const Vec2& crs : cap.vertices) {
        const Vec2 xz = transform.world_from_crs(crs);
        mesh.vertices.push_back({xz.x, -half_height, xz.y});
    }
    for (const Vec2& crs : cap.vertices) {
        const Vec2 xz = transform.world_from_crs(crs);
        mesh.vertices.push_back({xz.x, +half_height, xz.y});
    }
    const auto top = [n](std::uint32_t i) { return i + n; };

    for (const auto& tri : cap.triangles) {
        mesh.triangles.push_back({top(tri[0]), top(tri[1]), top(tri[2])});
        mesh.triangles.push_back({tri[0], tri[2], tri[1]});
    }

    // One side quad per ring edge; ring ranges are contiguous in cap.vertices.
    std::uint32_t ring_start = 0;
    const auto add_ring_sides = [&](std::uint32_t count) {
        for (std::uint32_t k = 0; k < count; ++k) {
            const std::uint32_t i = ring_start + k;
            const std::uint32_t j = ring_start + (k + 1) % count;
            mesh.triangles.push_back({i, j, top(j)});
            mesh.triangles.push_back({i, top(j), top(i)});
        }
        ring_start += count;
    };
    add_ring_sides(static_cast<std::uint32_t>(poly.exterior.size()));
    for (const auto& hole : poly.holes)
        add_ring_sides(static_cast<std::uint32_t>(hole.size()));

    // Canonical outward winding regardless of transform handedness.
    if (signed_volume(mesh) < 0.0)
        for (auto& tri : mesh.triangles) std::swap(tri[1], tri[2]);
    return mesh;
}

void write_obj(const std::filesystem::path& path, const std::vector<ShapeMesh>& meshes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "# extruded region prisms\n";
    std::size_t base = 1;  // OBJ indices are 1-based and file-global
    char line[128];
    for (const ShapeMesh& mesh : meshes) {
        out << "o region_" << mesh.region_id << "\n";
        for (const Vec3& v : mesh.vertices) {
            std::snprintf(line, sizeof line, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
            out << line;
        }
        for (const auto& tri : mesh.triangles) {
            out << "f " << base + tri[0] << ' ' << base + tri[1] << ' ' << base + tri[2]
                << "\n";
        }
        base += mesh.vertices.size();
    }
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ShapeMesh> read_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::vector<ShapeMesh> meshes;
    std::vector<Vec3> all_vertices;
    std::size_t object_base = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "o") {
            object_base = all_vertices.size();
            meshes.emplace_back();
            std::string name;
            ss >> name;
            if (name.rfind("region_", 0) == 0)
                meshes.back().region_id =
                    static_cast<std::uint32_t>(std::strtoul(name.c_str() + 7, nullptr, 10));
        } else if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z)) throw ParseError("bad OBJ vertex: " + line);
            all_vertices.push_back(v);
            if (meshes.empty()) meshes.emplace_back();
            meshes.back().vertices.push_back(v);
        } else if (tag == "f") {
            if (meshes.empty()) meshes.emplace_back();
            std::array<std::uint32_t, 3> tri{};
            for (int k = 0; k < 3; ++k) {
                long idx = 0;
                if (!(ss >> idx) || idx <= 0) throw ParseError("bad OBJ face: " + line);
                const std::size_t global = static_cast<std::size_t>(idx - 1);
                if (global < object_base || global >= all_vertices.size())
                    throw ParseError("OBJ face index out of object range: " + line);
                tri[static_cast<std::size_t>(k)] =
                    static_cast<std::uint32_t>(global - object_base);
            }
            meshes.back().triangles.push_back(tri);
        }
    }
    return meshes;
}

}  // namespace roverlay
