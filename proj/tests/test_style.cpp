#include <doctest.h>

#include <cmath>

#include "roverlay/composite.hpp"
#include "roverlay/errors.hpp"
#include "roverlay/style.hpp"
#include "test_support.hpp"

using namespace roverlay;

namespace {

constexpr double kFarInside = -1e6;  // far from the boundary, inside

OverlayMask id_mask(int w, int h, std::uint32_t id) {
    OverlayMask mask;
    mask.width = w;
    mask.height = h;
    mask.ids.assign(static_cast<std::size_t>(w) * h, id);
    return mask;
}

}  // namespace

TEST_CASE("fill covers everything") {
    const OverlayStyle fill = OverlayStyle::make(Pattern::fill, Density::low);
    CHECK(eval_pattern(fill, {0.0, 0.0}, kFarInside));
    CHECK(eval_pattern(fill, {123.4, -77.0}, kFarInside));
}

TEST_CASE("stripes follow the 50% duty cycle") {
    const OverlayStyle stripes = OverlayStyle::make(Pattern::stripes, Density::high);
    CHECK(stripes.stripe_width_px == 120.0);
    CHECK(eval_pattern(stripes, {60.0, 0.0}, kFarInside));
    CHECK_FALSE(eval_pattern(stripes, {180.0, 0.0}, kFarInside));

    const OverlayStyle wide = OverlayStyle::make(Pattern::stripes, Density::low);
    CHECK(wide.stripe_width_px == 240.0);
    CHECK(eval_pattern(wide, {120.0, 0.0}, kFarInside));
    CHECK_FALSE(eval_pattern(wide, {360.0, 0.0}, kFarInside));
}

TEST_CASE("dots sit on a square lattice with pitch twice the diameter") {
    const OverlayStyle dots = OverlayStyle::make(Pattern::dots, Density::low);
    CHECK(dots.dot_diameter_px == 240.0);
    CHECK(eval_pattern(dots, {0.0, 0.0}, kFarInside));
    CHECK(eval_pattern(dots, {480.0, 480.0}, kFarInside));
    CHECK_FALSE(eval_pattern(dots, {240.0, 240.0}, kFarInside));  // cell corner
    CHECK(eval_pattern(dots, {119.0, 0.0}, kFarInside));
    CHECK_FALSE(eval_pattern(dots, {121.0, 0.0}, kFarInside));
}

TEST_CASE("outline overrides the pattern inside the stroke band") {
    OverlayStyle style = OverlayStyle::make(Pattern::stripes, Density::high);
    style.outline = true;
    style.outline_width_px = 12.0;
    CHECK_FALSE(eval_pattern(style, {180.0, 0.0}, -7.0));  // out of band, stripe gap
    CHECK(eval_pattern(style, {180.0, 0.0}, -3.0));        // in band
    CHECK_FALSE(eval_pattern(style, {180.0, 0.0}, 3.0));   // outside the region
    CHECK(eval_pattern(style, {60.0, 0.0}, -7.0));         // stripe itself
}

TEST_CASE("pattern coverage fractions at an exactly tiled window") {
    // 2048/1920 scales the 240 px features to 256 px, so stripe period 512
    // and dot pitch 1024 tile a 2048-wide window exactly.
    const int n = 2048;
    for (Density density : {Density::low, Density::high}) {
        const OverlayStyle stripes =
            OverlayStyle::make(Pattern::stripes, density).scaled_for_bake(n);
        std::size_t covered = 0;
        for (int x = 0; x < n; ++x)
            if (eval_pattern(stripes, {x + 0.5, 0.5}, kFarInside)) ++covered;
        CHECK(static_cast<double>(covered) / n == doctest::Approx(0.5).epsilon(1e-12));
    }
    for (Density density : {Density::low, Density::high}) {
        const OverlayStyle dots = OverlayStyle::make(Pattern::dots, density).scaled_for_bake(n);
        std::size_t covered = 0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                if (eval_pattern(dots, {x + 0.5, y + 0.5}, kFarInside)) ++covered;
        const double fraction = static_cast<double>(covered) / (static_cast<double>(n) * n);
        CHECK(fraction ==
              doctest::Approx(3.14159265358979323846 / 16.0).epsilon(0.002));
    }
}

TEST_CASE("density changes frequency, not coverage") {
    const int n = 2048;
    double fractions[2];
    int slot = 0;
    for (Density density : {Density::low, Density::high}) {
        const OverlayStyle dots = OverlayStyle::make(Pattern::dots, density).scaled_for_bake(n);
        std::size_t covered = 0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                if (eval_pattern(dots, {x + 0.5, y + 0.5}, kFarInside)) ++covered;
        fractions[slot++] = static_cast<double>(covered) / (static_cast<double>(n) * n);
    }
    CHECK(fractions[0] == doctest::Approx(fractions[1]).epsilon(0.002));
}

TEST_CASE("enabling the outline never shrinks the covered set") {
    SplitMix rng(91);
    for (Pattern pattern : {Pattern::fill, Pattern::stripes, Pattern::dots}) {
        for (Density density : {Density::low, Density::high}) {
            OverlayStyle off = OverlayStyle::make(pattern, density);
            OverlayStyle on = off;
            on.outline = true;
            for (int i = 0; i < 2000; ++i) {
                const Vec2 p{rng.uniform(-2000, 2000), rng.uniform(-2000, 2000)};
                const double dist = rng.uniform(-40.0, 40.0);
                if (eval_pattern(off, p, dist)) CHECK(eval_pattern(on, p, dist));
            }
        }
    }
}

TEST_CASE("effective opacity clamps into the policy range") {
    const OpacityPolicy policy;
    std::vector<ClampWarning> warnings;
    CHECK(effective_opacity(0.45, policy, &warnings) == 0.45);
    CHECK(warnings.empty());
    CHECK(effective_opacity(0.05, policy, &warnings) == 0.20);
    CHECK(effective_opacity(0.90, policy, &warnings) == 0.70);
    REQUIRE(warnings.size() == 2);
    CHECK(warnings[0].requested == 0.05);
    CHECK(warnings[0].applied == 0.20);
    CHECK(warnings[1].requested == 0.90);
    CHECK(warnings[1].applied == 0.70);
}

TEST_CASE("compositing identities are exact") {
    RgbImage base = RgbImage::filled(8, 8, {0.2f, 0.2f, 0.2f});
    for (std::size_t i = 0; i < base.px.size(); ++i) base.px[i] += 0.001f * (i % 17);
    const OverlayMask mask = id_mask(8, 8, 1);
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    styles[1].color = {0.9f, 0.1f, 0.3f};
    const OpacityPolicy policy;

    styles[1].opacity = 0.0;
    const RgbImage zero = composite(base, mask, styles, policy, /*clamp=*/false);
    for (std::size_t i = 0; i < base.px.size(); ++i) CHECK(zero.px[i] == base.px[i]);

    styles[1].opacity = 1.0;
    const RgbImage one = composite(base, mask, styles, policy, false);
    for (std::size_t i = 0; i < base.px.size(); i += 3) {
        CHECK(one.px[i] == styles[1].color.r);
        CHECK(one.px[i + 1] == styles[1].color.g);
        CHECK(one.px[i + 2] == styles[1].color.b);
    }
}

TEST_CASE("blend arithmetic matches the convex combination") {
    const RgbImage base = RgbImage::filled(2, 2, {0.2f, 0.2f, 0.2f});
    const OverlayMask mask = id_mask(2, 2, 1);
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    styles[1].color = {1.0f, 0.0f, 0.0f};
    styles[1].opacity = 0.5;
    const RgbImage out = composite(base, mask, styles, OpacityPolicy{}, false);
    CHECK(out.px[0] == doctest::Approx(0.6).epsilon(1e-6));
    CHECK(out.px[1] == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(out.px[2] == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("compositing is convex and monotone in alpha") {
    SplitMix rng(42);
    RgbImage base = RgbImage::filled(16, 16, {0, 0, 0});
    for (float& v : base.px) v = static_cast<float>(rng.next_double());
    const OverlayMask mask = id_mask(16, 16, 1);
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    styles[1].color = {0.7f, 0.4f, 0.9f};

    RgbImage prev = base;
    for (double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        styles[1].opacity = alpha;
        const RgbImage out = composite(base, mask, styles, OpacityPolicy{}, false);
        const float color[3] = {styles[1].color.r, styles[1].color.g, styles[1].color.b};
        for (std::size_t i = 0; i < out.px.size(); ++i) {
            const float lo = std::min(base.px[i], color[i % 3]);
            const float hi = std::max(base.px[i], color[i % 3]);
            CHECK(out.px[i] >= lo - 1e-6f);
            CHECK(out.px[i] <= hi + 1e-6f);
            // Monotone toward the style color as alpha grows.
            if (color[i % 3] >= base.px[i])
                CHECK(out.px[i] >= prev.px[i] - 1e-6f);
            else
                CHECK(out.px[i] <= prev.px[i] + 1e-6f);
        }
        prev = out;
    }
}

TEST_CASE("uncovered pixels are bit-identical") {
    RgbImage base = RgbImage::filled(8, 8, {0.3f, 0.5f, 0.7f});
    OverlayMask mask = id_mask(8, 8, 0);
    for (int x = 2; x < 5; ++x) mask.ids[3 * 8 + x] = 1;
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    const RgbImage out = composite(base, mask, styles, OpacityPolicy{});
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            if (mask.id_at(x, y) > 0) continue;
            for (int c = 0; c < 3; ++c) CHECK(out.at(x, y)[c] == base.at(x, y)[c]);
        }
}

TEST_CASE("composite clamps opacity by default and reports it") {
    const RgbImage base = RgbImage::filled(2, 2, {0.0f, 0.0f, 0.0f});
    const OverlayMask mask = id_mask(2, 2, 1);
    StyleMap styles;
    styles[1] = OverlayStyle::make(Pattern::fill, Density::low);
    styles[1].color = {1.0f, 1.0f, 1.0f};
    styles[1].opacity = 0.9;
    std::vector<ClampWarning> warnings;
    const RgbImage clamped = composite(base, mask, styles, OpacityPolicy{}, true, &warnings);
    CHECK(clamped.px[0] == doctest::Approx(0.7).epsilon(1e-6));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].requested == 0.9);
    CHECK(warnings[0].applied == 0.7);

    const RgbImage raw = composite(base, mask, styles, OpacityPolicy{}, false);
    CHECK(raw.px[0] == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("composite validates inputs") {
    const RgbImage base = RgbImage::filled(4, 4, {0, 0, 0});
    CHECK_THROWS_AS(composite(base, id_mask(3, 4, 1), StyleMap{}, OpacityPolicy{}),
                    DimensionMismatch);
    CHECK_THROWS_AS(composite(base, id_mask(4, 4, 9), StyleMap{}, OpacityPolicy{}),
                    MissingStyle);
}
