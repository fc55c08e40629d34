// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "layercomp/trimask.hpp"
#include "layercomp/video.hpp"

namespace layercomp {

inline constexpr std::size_t kDefaultWindow = 85;
inline constexpr std::size_t kDefaultStride = 64;

enum class RampShape { linear, cosine };

/// Half-open frame range [start, end).
struct FrameWindow {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start; }
    bool operator==(const FrameWindow&) const = default;
};

/// Overlapping fixed-length windows over a sequence and per-frame blend weights.
/// For every frame the weights of the windows covering it sum to 1.
struct WindowPlan {
    std::size_t total_frames = 0;
    std::size_t window = kDefaultWindow;
    std::size_t stride = kDefaultStride;
    std::vector<FrameWindow> windows;
    std::vector<std::vector<double>> weights;  // weights[i][f - windows[i].start]

    nlohmann::ordered_json to_json() const;
};

/// Sequences no longer than the window get one unit-weight window. Longer ones get windows at
/// multiples of the stride, the last one right-aligned to the end; overlaps are ramped and
/// then normalized per frame. Throws ValidationError for zero sizes or stride > window.
WindowPlan plan_windows(std::size_t total_frames, std::size_t window = kDefaultWindow,
                        std::size_t stride = kDefaultStride, RampShape ramp = RampShape::linear);

/// Weighted per-frame sum of the window outputs.
VideoClip blend(const WindowPlan& plan, std::span<const VideoClip> window_outputs);

/// Receives the clip and tri-mask slices of one window plus its index; must return a clip of
/// the slice's shape.
using WindowProcessor = std::function<VideoClip(const VideoClip&, const TriMask&, std::size_t)>;

/// Slices the conditioning per window, runs the processor on each and blends the results.
VideoClip run_windowed(const VideoClip& clip, const TriMask& trimask, const WindowProcessor& processor,
                       const WindowPlan& plan);

}  // namespace layercomp
