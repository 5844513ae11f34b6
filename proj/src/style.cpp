#include "roverlay/style.hpp"

#include <algorithm>
#include <cmath>

namespace roverlay {

bool eval_pattern(const OverlayStyle& style, const Vec2& p, double dist_px) {
    // Inner half of a stroke centered on the boundary; never outside the RoI.
    if (style.outline && dist_px < 0.0 && std::abs(dist_px) <= style.outline_width_px * 0.5)
        return true;
    switch (style.pattern) {
        case Pattern::fill:
            return true;
        case Pattern::stripes: {
            const double w = style.stripe_width_px;
            const long long band = static_cast<long long>(std::floor(p.x / w));
            return (band % 2 + 2) % 2 == 0;
        }
        case Pattern::dots: {
            const double pitch = 2.0 * style.dot_diameter_px;
            const double dx = p.x - pitch * std::round(p.x / pitch);
            const double dy = p.y - pitch * std::round(p.y / pitch);
            return std::sqrt(dx * dx + dy * dy) <= style.dot_diameter_px * 0.5;
        }
    }
    return false;
}

double effective_opacity(double requested, const OpacityPolicy& policy,
                         std::vector<ClampWarning>* warnings) {
    const double applied = std::clamp(requested, policy.min, policy.max);
    if (applied != requested && warnings) warnings->push_back({requested, applied});
    return applied;
}

}  // namespace roverlay
