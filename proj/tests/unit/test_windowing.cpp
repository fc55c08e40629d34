// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "layercomp/windowing.hpp"
#include "oracles.hpp"

using namespace layercomp;

TEST(PlanWindows, MatchesEnumeration) {
    for (std::size_t n = 1; n <= 300; ++n) {
        const auto plan = plan_windows(n);
        const auto want = oracle::enumerate_windows(n, 85, 64);
        ASSERT_EQ(plan.windows.size(), want.size()) << "n=" << n;
        for (std::size_t i = 0; i < want.size(); ++i) {
            ASSERT_EQ(plan.windows[i].start, want[i].first) << "n=" << n;
            ASSERT_EQ(plan.windows[i].end, want[i].second) << "n=" << n;
        }
    }
}

TEST(PlanWindows, PartitionOfUnity) {
    for (auto ramp : {RampShape::linear, RampShape::cosine}) {
        for (std::size_t n = 1; n <= 300; ++n) {
            const auto plan = plan_windows(n, 85, 64, ramp);
            std::vector<double> sum(n, 0.0);
            for (std::size_t i = 0; i < plan.windows.size(); ++i) {
                ASSERT_EQ(plan.weights[i].size(), plan.windows[i].length());
                for (std::size_t f = plan.windows[i].start; f < plan.windows[i].end; ++f) {
                    const double w = plan.weights[i][f - plan.windows[i].start];
                    ASSERT_GT(w, 0.0);
                    sum[f] += w;
                }
            }
            for (std::size_t f = 0; f < n; ++f) {
                ASSERT_NEAR(sum[f], 1.0, 1e-9) << "n=" << n << " frame " << f;
            }
        }
    }
}

TEST(PlanWindows, HandEnumerationFor149) {
    const auto plan = plan_windows(149);
    ASSERT_EQ(plan.windows.size(), 2u);
    EXPECT_EQ(plan.windows[0], (FrameWindow{0, 85}));
    EXPECT_EQ(plan.windows[1], (FrameWindow{64, 149}));
    for (std::size_t f = 0; f < 64; ++f) {
        EXPECT_DOUBLE_EQ(plan.weights[0][f], 1.0);
    }
    for (std::size_t f = 64; f < 85; ++f) {
        EXPECT_NEAR(plan.weights[0][f], (85.0 - f) / 22.0, 1e-12) << f;
        EXPECT_NEAR(plan.weights[1][f - 64], (f - 63.0) / 22.0, 1e-12) << f;
    }
    for (std::size_t f = 85; f < 149; ++f) {
        EXPECT_DOUBLE_EQ(plan.weights[1][f - 64], 1.0);
    }
}

TEST(PlanWindows, ShortClipIsOneWindow) {
    const auto plan = plan_windows(40);
    ASSERT_EQ(plan.windows.size(), 1u);
    EXPECT_EQ(plan.windows[0], (FrameWindow{0, 40}));
}

TEST(PlanWindows, Validation) {
    EXPECT_THROW(plan_windows(0), ValidationError);
    EXPECT_THROW(plan_windows(10, 0, 1), ValidationError);
    EXPECT_THROW(plan_windows(10, 5, 0), ValidationError);
    EXPECT_THROW(plan_windows(10, 5, 6), ValidationError);
}

TEST(PlanWindows, JsonLayout) {
    const auto j = plan_windows(149).to_json();
    EXPECT_EQ(j["total_frames"], 149);
    EXPECT_EQ(j["windows"][1][0], 64);
    EXPECT_EQ(j["weights"][0].size(), 85u);
}

TEST(RunWindowed, IdentityProcessorReconstructs) {
    std::mt19937_64 rng(61);
    for (std::size_t n : {1u, 84u, 85u, 86u, 149u, 150u, 213u}) {
        const auto clip = oracle::random_clip(rng, Shape{n, 3, 4});
        const auto tri = TriMask::uniform_unknown(clip.shape());
        std::size_t calls = 0;
        const auto plan = plan_windows(n);
        const auto out = run_windowed(
            clip, tri,
            [&](const VideoClip& c, const TriMask& m, std::size_t i) {
                EXPECT_EQ(c.frames(), plan.windows[i].length());
                EXPECT_EQ(m.frames(), c.frames());
                ++calls;
                return c;
            },
            plan);
        EXPECT_EQ(calls, plan.windows.size());
        for (std::size_t i = 0; i < clip.values().size(); ++i) {
            ASSERT_NEAR(out.values()[i], clip.values()[i], 1e-6);
        }
    }
}

TEST(RunWindowed, ProcessorMustPreserveShape) {
    const VideoClip clip(Shape{100, 2, 2});
    const auto tri = TriMask::uniform_unknown(clip.shape());
    EXPECT_THROW(run_windowed(
                     clip, tri, [](const VideoClip& c, const TriMask&, std::size_t) { return c.slice(0, 1); },
                     plan_windows(100)),
                 ShapeError);
}

TEST(Blend, CountMismatchThrows) {
    const auto plan = plan_windows(149);
    std::vector<VideoClip> one{VideoClip(Shape{85, 1, 1})};
    EXPECT_THROW(blend(plan, one), ShapeError);
}
