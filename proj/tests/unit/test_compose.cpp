// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "layercomp/compose.hpp"
#include "oracles.hpp"

using namespace layercomp;

namespace {

const Shape kShape{3, 7, 9};

}  // namespace

TEST(Over, AlphaZeroAndOneAreExact) {
    std::mt19937_64 rng(1);
    const auto fg = oracle::random_clip(rng, kShape);
    const auto bg = oracle::random_clip(rng, kShape);
    EXPECT_EQ(over(fg, AlphaMatte(kShape, 0.0f), bg).values().size(), bg.values().size());
    EXPECT_TRUE(std::ranges::equal(over(fg, AlphaMatte(kShape, 0.0f), bg).values(), bg.values()));
    EXPECT_TRUE(std::ranges::equal(over(fg, AlphaMatte(kShape, 1.0f), bg).values(), fg.values()));
}

TEST(Over, MatchesScalarOracle) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto fg = oracle::random_clip(rng, kShape);
        const auto bg = oracle::random_clip(rng, kShape);
        const auto a = oracle::random_alpha(rng, kShape);
        const auto got = over(fg, a, bg);
        const auto want = oracle::scalar_over(fg, a, bg);
        for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_NEAR(got.values()[i], want[i], 1e-6) << "sample " << i;
        }
    }
}

TEST(Over, ShapeMismatchThrows) {
    const VideoClip fg(kShape);
    const VideoClip bg(Shape{3, 7, 8});
    EXPECT_THROW(over(fg, AlphaMatte(kShape), bg), ShapeError);
    EXPECT_THROW(over(fg, AlphaMatte(Shape{2, 7, 9}), fg), ShapeError);
}

TEST(ComposeSubject, SelectsForegroundInsideMask) {
    std::mt19937_64 rng(3);
    const auto fg = oracle::random_clip(rng, kShape);
    const auto bg = oracle::random_clip(rng, kShape);
    const auto m = oracle::random_mask(rng, kShape);
    const auto out = compose_subject_over(fg, m, bg);
    for (std::size_t p = 0; p < kShape.pixel_count(); ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            const float want = m.values()[p] ? fg.values()[p * 3 + c] : bg.values()[p * 3 + c];
            ASSERT_EQ(out.values()[p * 3 + c], want);
        }
    }
}

TEST(ComposeSubject, RejectsNonBinaryMask) {
    const VideoClip c(kShape);
    BinaryMaskVideo m(kShape);
    m.values()[5] = 3;
    EXPECT_THROW(compose_subject_over(c, m, c), ValidationError);
}

TEST(DiffDelta, AbsoluteDifference) {
    std::mt19937_64 rng(4);
    const auto a = oracle::random_clip(rng, kShape);
    const auto b = oracle::random_clip(rng, kShape);
    const auto d = diff_delta(a, b);
    for (std::size_t i = 0; i < d.values().size(); ++i) {
        ASSERT_FLOAT_EQ(d.values()[i], std::fabs(a.values()[i] - b.values()[i]));
    }
}

TEST(RecomposeCheck, ExactLayersGiveTinyResidual) {
    std::mt19937_64 rng(5);
    const auto fg = oracle::random_clip(rng, kShape);
    const auto bg = oracle::random_clip(rng, kShape);
    const auto a = oracle::random_alpha(rng, kShape);
    const auto r = recompose_check(fg, a, bg, over(fg, a, bg));
    EXPECT_EQ(r.mean_abs, 0.0);
    EXPECT_EQ(r.max_abs, 0.0);

    const auto r2 = recompose_check(fg, a, bg, VideoClip(kShape, 0.0f));
    double sum = 0.0;
    const auto composite = over(fg, a, bg);
    for (float v : composite.values()) {
        sum += v;
    }
    EXPECT_NEAR(r2.mean_abs, sum / static_cast<double>(kShape.pixel_count() * 3), 1e-9);
}

TEST(Unpremultiply, InvertsPremultiplication) {
    std::mt19937_64 rng(6);
    const auto fg = oracle::random_clip(rng, kShape);
    auto a = oracle::random_alpha(rng, kShape);
    a.values()[0] = 0.0f;
    VideoClip pre(kShape);
    for (std::size_t p = 0; p < kShape.pixel_count(); ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            pre.values()[p * 3 + c] = fg.values()[p * 3 + c] * a.values()[p];
        }
    }
    const auto back = unpremultiply(pre, a);
    EXPECT_EQ(back.values()[0], 0.0f);
    for (std::size_t p = 1; p < kShape.pixel_count(); ++p) {
        if (a.values()[p] > 1e-3f) {
            for (std::size_t c = 0; c < 3; ++c) {
                ASSERT_NEAR(back.values()[p * 3 + c], fg.values()[p * 3 + c], 1e-4);
            }
        }
    }
}

TEST(PorterDuff, OpaqueBottomMatchesOver) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (int i = 0; i < 1000; ++i) {
        const RgbaPixel top{{u(rng), u(rng), u(rng)}, u(rng)};
        const RgbaPixel bottom{{u(rng), u(rng), u(rng)}, 1.0f};
        const auto out = composite_over(top, bottom);
        ASSERT_FLOAT_EQ(out.alpha, 1.0f);
        for (std::size_t c = 0; c < 3; ++c) {
            ASSERT_NEAR(out.color[c], top.alpha * top.color[c] + (1 - top.alpha) * bottom.color[c], 1e-6);
        }
    }
}

TEST(PorterDuff, Associative) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const RgbaPixel a{{u(rng), u(rng), u(rng)}, u(rng)};
        const RgbaPixel b{{u(rng), u(rng), u(rng)}, u(rng)};
        const RgbaPixel c{{u(rng), u(rng), u(rng)}, u(rng)};
        const auto left = composite_over(composite_over(a, b), c);
        const auto right = composite_over(a, composite_over(b, c));
        worst = std::max(worst, static_cast<double>(std::fabs(left.alpha - right.alpha)));
        for (std::size_t k = 0; k < 3; ++k) {
            worst = std::max(worst, static_cast<double>(std::fabs(left.color[k] - right.color[k])));
        }
    }
    EXPECT_LE(worst, 1e-5);
}

TEST(PorterDuff, FullyTransparentStaysTransparent) {
    const auto out = composite_over({{1, 1, 1}, 0.0f}, {{0.5f, 0.5f, 0.5f}, 0.0f});
    EXPECT_EQ(out.alpha, 0.0f);
}
