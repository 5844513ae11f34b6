#include "roverlay/composite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "roverlay/errors.hpp"
#include "roverlay/parallel.hpp"

namespace roverlay {

RgbImage composite(const RgbImage& base, const OverlayMask& mask, const StyleMap& styles,
                   const OpacityPolicy& policy, bool clamp_opacity,
                   std::vector<ClampWarning>* warnings, int threads) {
    if (base.width != mask.width || base.height != mask.height)
        throw DimensionMismatch("mask dimensions do not match the base image");

    std::set<std::uint32_t> present(mask.ids.begin(), mask.ids.end());
    present.erase(0);
    for (std::uint32_t id : present)
        if (!styles.count(id)) throw MissingStyle("no style for region id " + std::to_string(id));

    RgbImage out = base;

    if (mask.has_rgba()) {
        // One clamp decision (and warning) per 8-bit alpha present in the mask.
        std::array<bool, 256> alpha_present{};
        for (std::size_t i = 3; i < mask.rgba.size(); i += 4) alpha_present[mask.rgba[i]] = true;
        std::array<float, 256> alpha_lut{};
        for (int a = 1; a < 256; ++a) {
            if (!alpha_present[a]) continue;
            const double requested = a / 255.0;
            alpha_lut[a] = static_cast<float>(
                clamp_opacity ? effective_opacity(requested, policy, warnings) : requested);
        }
        parallel_rows(base.height, threads, [&](int y0, int y1) {
            for (int y = y0; y < y1; ++y) {
                for (int x = 0; x < base.width; ++x) {
                    const std::size_t idx = static_cast<std::size_t>(y) * base.width + x;
                    const std::uint8_t* sample = mask.rgba.data() + 4 * idx;
                    if (sample[3] == 0) continue;
                    const float alpha = alpha_lut[sample[3]];
                    float* px = out.px.data() + 3 * idx;
                    px[0] = std::lerp(px[0], sample[0] / 255.0f, alpha);
                    px[1] = std::lerp(px[1], sample[1] / 255.0f, alpha);
                    px[2] = std::lerp(px[2], sample[2] / 255.0f, alpha);
                }
            }
        });
        return out;
    }

    std::map<std::uint32_t, std::pair<float, Color3f>> blend;
    for (std::uint32_t id : present) {
        const OverlayStyle& style = styles.at(id);
        const double alpha =
            clamp_opacity ? effective_opacity(style.opacity, policy, warnings) : style.opacity;
        blend[id] = {static_cast<float>(alpha), style.color};
    }
    parallel_rows(base.height, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < base.width; ++x) {
                const std::size_t idx = static_cast<std::size_t>(y) * base.width + x;
                const std::uint32_t id = mask.ids[idx];
                if (id == 0) continue;
                const auto& [alpha, color] = blend.at(id);
                float* px = out.px.data() + 3 * idx;
                px[0] = std::lerp(px[0], color.r, alpha);
                px[1] = std::lerp(px[1], color.g, alpha);
                px[2] = std::lerp(px[2], color.b, alpha);
            }
        }
    });
    return out;
}

}  // namespace roverlay
