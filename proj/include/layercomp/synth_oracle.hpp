// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "layercomp/video.hpp"

namespace layercomp {

enum class BackgroundKind { checkerboard, gradient };

/// Procedural paired scene: a rectangular subject moving linearly over a static background,
/// casting a hard shadow that is the subject footprint translated by (shadow_dx, shadow_dy).
struct OracleScene {
    std::size_t height = 64;
    std::size_t width = 64;
    std::size_t frames = 24;

    std::size_t subject_width = 16;
    std::size_t subject_height = 16;
    double start_x = 8.0;  // top-left corner at frame 0
    double start_y = 8.0;
    double velocity_x = 0.5;  // pixels per frame
    double velocity_y = 0.25;
    std::array<float, 3> subject_color{0.2f, 0.4f, 0.7f};

    int shadow_dx = 6;
    int shadow_dy = 5;
    float kappa = 0.45f;  // shadow keeps kappa of the background light
    /// Gaussian falloff sigma (pixels) outside the footprint; 0 is a hard edge.
    float shadow_softness = 0.0f;

    BackgroundKind background = BackgroundKind::checkerboard;
    std::size_t checker_size = 8;
    std::array<float, 3> color_a{0.85f, 0.8075f, 0.765f};
    std::array<float, 3> color_b{0.6f, 0.57f, 0.54f};

    std::uint64_t seed = 0;

    /// Subject top-left corner at frame t (rounded to whole pixels).
    std::pair<std::int64_t, std::int64_t> subject_origin(std::size_t t) const;

    /// Throws ValidationError on a subject that leaves the frame, kappa outside (0,1), etc.
    void validate() const;

    /// A randomized scene of the given size whose subject and shadow both stay in frame.
    static OracleScene random(std::uint64_t seed, std::size_t height = 64, std::size_t width = 64,
                              std::size_t frames = 24);
};

void to_json(nlohmann::json& j, const OracleScene& scene);
void from_json(const nlohmann::json& j, OracleScene& scene);

struct OracleBundle {
    VideoClip gt;
    VideoClip over;
    VideoClip fg_star;
    VideoClip bg;
    AlphaMatte alpha;
    BinaryMaskVideo subject_mask;
    BinaryMaskVideo effect_mask_truth;
};

/// Exact layer decomposition: gt = over(fg_star, alpha, bg), I_over = subject composite,
/// truth = shadow footprint minus subject footprint.
OracleBundle generate(const OracleScene& scene);

/// Additive Gaussian noise on gt (clamped), then floor(frac * T*H*W) distinct pixels set to
/// 0 or 1 in all channels. Deterministic in seed.
OracleBundle perturb(OracleBundle bundle, double noise_sigma, double salt_pepper_frac, std::uint64_t seed);

}  // namespace layercomp
