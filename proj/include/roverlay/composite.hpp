#pragma once

#include <vector>

#include "roverlay/image.hpp"
#include "roverlay/overlay.hpp"
#include "roverlay/style.hpp"

namespace roverlay {

// Alpha-blends overlay samples onto the shaded base image. Id-only masks
// (CSG, PPS) blend the region's style color at its (optionally clamped)
// opacity; decal masks blend their per-pixel RGBA sample. Pixels with id 0
// pass through bit-identical.
RgbImage composite(const RgbImage& base, const OverlayMask& mask, const StyleMap& styles,
                   const OpacityPolicy& policy, bool clamp_opacity = true,
                   std::vector<ClampWarning>* warnings = nullptr, int threads = 1);

}  // namespace roverlay
