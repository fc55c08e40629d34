// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "layercomp/video.hpp"

namespace layercomp {

/// Straight-alpha over: out = alpha * fg + (1 - alpha) * bg, per pixel and channel.
VideoClip over(const VideoClip& fg, const AlphaMatte& alpha, const VideoClip& bg);

/// Re-composites the subject over a clean background with a hard mask:
/// out = mask * fg_star + (1 - mask) * bg. Throws ValidationError on non-binary masks.
VideoClip compose_subject_over(const VideoClip& fg_star, const BinaryMaskVideo& subject, const VideoClip& bg);

/// Per-pixel, per-channel |a - b|.
VideoClip diff_delta(const VideoClip& a, const VideoClip& b);

struct ResidualStats {
    double mean_abs = 0.0;  // over every sample (T*H*W*3)
    double max_abs = 0.0;
};

/// How well (fg_star, alpha, bg) reconstructs gt under over().
ResidualStats recompose_check(const VideoClip& fg_star, const AlphaMatte& alpha, const VideoClip& bg,
                              const VideoClip& gt);

/// Converts premultiplied colour to straight colour; pixels with zero alpha become black.
VideoClip unpremultiply(const VideoClip& premultiplied, const AlphaMatte& alpha);

/// A single straight-alpha RGBA sample, used for general layer stacking.
struct RgbaPixel {
    std::array<float, 3> color{};
    float alpha = 0.0f;
};

/// Porter-Duff "top over bottom" for straight alpha with both layers semi-transparent.
RgbaPixel composite_over(const RgbaPixel& top, const RgbaPixel& bottom);

}  // namespace layercomp
