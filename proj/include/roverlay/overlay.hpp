#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roverlay/mesh.hpp"
#include "roverlay/roi_texture.hpp"
#include "roverlay/scene.hpp"
#include "roverlay/transform.hpp"
#include "roverlay/vec.hpp"

namespace roverlay {

// Auxiliary camera that a baked texture is projected through.
struct Projector {
    Vec3 position{0.0, 100.0, 0.0};
    Vec3 forward{0.0, -1.0, 0.0};
    Vec3 up{0.0, 0.0, -1.0};
    bool orthographic = true;
    double vfov_deg = 60.0;  // perspective mode
    double aspect = 1.0;
    double half_width = 1.0;  // orthographic extents
    double half_height = 1.0;
    double near_clip = 0.0;
    double far_clip = 1e6;

    Camera::Basis basis() const;

    // Straight-down orthographic projector covering a CRS-aligned window
    // (identity world<->CRS): image u runs along +x, v along +z, matching the
    // RoiTexture row convention.
    static Projector top_down_ortho(const CrsRect& window, double altitude, double depth_range);
};

// Per-pixel overlay sample; ids use 0 for "no overlay". Decal masks carry an
// RGBA sample per pixel as well.
struct OverlayMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> ids;
    std::vector<std::uint8_t> rgba;

    bool has_rgba() const { return !rgba.empty(); }
    std::uint32_t id_at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
};

// Normalized image-plane coordinate of a world point inside the projector
// frustum, v increasing down the image; nullopt outside.
std::optional<Vec2> decal_uv(const Projector& proj, const Vec3& p);

// Image-space CSG: per non-sky pixel, the camera->fragment segment is cast
// against every shape mesh and odd crossing parity marks the pixel inside.
// Meshes must be closed manifolds (OpenMesh otherwise) and the camera must
// lie outside each solid. Later meshes win where parities overlap.
OverlayMask csg_mask(const GBuffer& g, const std::vector<ShapeMesh>& meshes, const Camera& cam,
                     int threads = 1);

struct LayerFilter {
    bool terrain = true;
    bool objects = false;

    bool passes(Layer layer) const {
        return (layer == Layer::terrain && terrain) || (layer == Layer::object && objects);
    }
};

// Baked RGBA style texture plus the co-baked region ids it was derived from.
struct DecalTexture {
    int width = 0;
    int height = 0;
    CrsRect crs_window;
    std::vector<std::uint8_t> rgba;
    std::vector<std::uint32_t> ids;
};

DecalTexture make_decal_texture(const RoiTexture& roi, const RgbaImage8& styled);

// Full-screen decal pass: every pixel is back-projected into the projector
// frustum and the baked texture sampled nearest-neighbor. The per-pixel cost
// is paid once per projector regardless of how much it covers.
OverlayMask apply_decal(const GBuffer& g, const Projector& proj, const DecalTexture& baked,
                        const LayerFilter& filter = {}, int threads = 1);

struct PpsStats {
    std::uint64_t texture_fetches = 0;
};

// Post-process sampling: maps each pixel's recorded world position through
// the world->CRS transform and fetches the region id texel. Exactly one
// texture fetch per pixel; sky and out-of-window results are masked to 0.
// Paints every non-sky layer, objects included.
OverlayMask pps_lookup(const GBuffer& g, const WorldCrsTransform& transform,
                       const RoiTexture& roi, PpsStats* stats = nullptr, int threads = 1);

}  // namespace roverlay
