#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "roverlay/vec.hpp"

namespace roverlay {

enum class Pattern : std::uint8_t { fill, stripes, dots };
enum class Density : std::uint8_t { low, high };

// Pattern geometry is expressed in texture pixels at the 1920-wide reference
// resolution: 240 px features at low density, 120 px at high. Callers baking
// at another width scale stripe/dot sizes by width/1920 (see scaled_for_bake).
struct OverlayStyle {
    Pattern pattern = Pattern::fill;
    Density density = Density::low;
    bool outline = false;
    double outline_width_px = 12.0;
    Color3f color{1.0f, 0.2f, 0.1f};
    double opacity = 0.45;
    double stripe_width_px = 240.0;
    double dot_diameter_px = 240.0;

    static OverlayStyle make(Pattern pattern, Density density) {
        OverlayStyle s;
        s.pattern = pattern;
        s.density = density;
        const double feature = density == Density::low ? 240.0 : 120.0;
        s.stripe_width_px = feature;
        s.dot_diameter_px = feature;
        return s;
    }

    // Stripe/dot geometry scaled from the 1920-reference to a target width.
    OverlayStyle scaled_for_bake(int texture_width) const {
        OverlayStyle s = *this;
        const double scale = texture_width / 1920.0;
        s.stripe_width_px *= scale;
        s.dot_diameter_px *= scale;
        return s;
    }
};

struct OpacityPolicy {
    double min = 0.20;
    double max = 0.70;
    double default_value = 0.45;
};

struct ClampWarning {
    double requested = 0.0;
    double applied = 0.0;
};

// Binary pattern coverage at a texture-pixel coordinate. `dist_px` is the
// signed boundary distance (negative inside); an enabled outline covers the
// inner half of a stroke centered on the boundary regardless of pattern.
bool eval_pattern(const OverlayStyle& style, const Vec2& p, double dist_px);

// Clamps the requested opacity into the policy range, recording a warning
// when clamping changed the value.
double effective_opacity(double requested, const OpacityPolicy& policy,
                         std::vector<ClampWarning>* warnings = nullptr);

using StyleMap = std::map<std::uint32_t, OverlayStyle>;

}  // namespace roverlay
