// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace layercomp {
namespace {

double ramp_value(double u, RampShape shape) {
    if (shape == RampShape::linear) {
        return u;
    }
    const double s = std::sin(0.5 * std::numbers::pi * u);
    return s * s;
}

}  // namespace

WindowPlan plan_windows(std::size_t total_frames, std::size_t window, std::size_t stride, RampShape ramp) {
    if (total_frames == 0 || window == 0 || stride == 0) {
        throw ValidationError("plan_windows: frame count, window and stride must be positive");
    }
    if (stride > window) {
        throw ValidationError("plan_windows: stride " + std::to_string(stride) + " exceeds window " +
                              std::to_string(window));
    }

    WindowPlan plan;
    plan.total_frames = total_frames;
    plan.window = window;
    plan.stride = stride;

    if (total_frames <= window) {
        plan.windows.push_back({0, total_frames});
        plan.weights.emplace_back(total_frames, 1.0);
        return plan;
    }

    for (std::size_t start = 0; start + window < total_frames; start += stride) {
        plan.windows.push_back({start, start + window});
    }
    const std::size_t last = total_frames - window;
    if (plan.windows.back().start != last) {
        plan.windows.push_back({last, total_frames});
    }

    const std::size_t n = plan.windows.size();
    plan.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& w = plan.windows[i];
        auto& wt = plan.weights[i];
        wt.assign(w.length(), 1.0);
        if (i > 0 && plan.windows[i - 1].end > w.start) {
            const std::size_t overlap_end = plan.windows[i - 1].end;
            const double len = static_cast<double>(overlap_end - w.start);
            for (std::size_t f = w.start; f < overlap_end; ++f) {
                const double u = static_cast<double>(f - w.start + 1) / (len + 1.0);
                wt[f - w.start] = std::min(wt[f - w.start], ramp_value(u, ramp));
            }
        }
        if (i + 1 < n && plan.windows[i + 1].start < w.end) {
            const std::size_t overlap_start = plan.windows[i + 1].start;
            const double len = static_cast<double>(w.end - overlap_start);
            for (std::size_t f = overlap_start; f < w.end; ++f) {
                const double u = static_cast<double>(w.end - f) / (len + 1.0);
                wt[f - w.start] = std::min(wt[f - w.start], ramp_value(u, ramp));
            }
        }
    }

    std::vector<double> totals(total_frames, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = plan.windows[i].start; f < plan.windows[i].end; ++f) {
            totals[f] += plan.weights[i][f - plan.windows[i].start];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = plan.windows[i].start; f < plan.windows[i].end; ++f) {
            plan.weights[i][f - plan.windows[i].start] /= totals[f];
        }
    }
    return plan;
}

nlohmann::ordered_json WindowPlan::to_json() const {
    nlohmann::ordered_json j;
    j["total_frames"] = total_frames;
    j["window"] = window;
    j["stride"] = stride;
    j["windows"] = nlohmann::ordered_json::array();
    for (const auto& w : windows) {
        j["windows"].push_back({w.start, w.end});
    }
    j["weights"] = weights;
    return j;
}

VideoClip blend(const WindowPlan& plan, std::span<const VideoClip> window_outputs) {
    if (window_outputs.size() != plan.windows.size()) {
        throw ShapeError("blend: " + std::to_string(window_outputs.size()) + " window outputs for " +
                         std::to_string(plan.windows.size()) + " windows");
    }
    if (window_outputs.empty()) {
        throw ShapeError("blend: plan has no windows");
    }
    const Shape first = window_outputs.front().shape();
    for (std::size_t i = 0; i < window_outputs.size(); ++i) {
        const auto& out = window_outputs[i];
        if (out.frames() != plan.windows[i].length()) {
            throw ShapeError("blend: window " + std::to_string(i) + " output has " + std::to_string(out.frames()) +
                             " frames, expected " + std::to_string(plan.windows[i].length()));
        }
        require_same_frame_size(first, out.shape(), "blend: window " + std::to_string(i) + " output");
    }

    const Shape shape{plan.total_frames, first.height, first.width};
    std::vector<double> acc(shape.pixel_count() * 3, 0.0);
    const std::size_t frame_size = shape.pixels_per_frame() * 3;
    for (std::size_t i = 0; i < plan.windows.size(); ++i) {
        const auto& w = plan.windows[i];
        for (std::size_t f = w.start; f < w.end; ++f) {
            const double weight = plan.weights[i][f - w.start];
            auto src = window_outputs[i].frame(f - w.start);
            double* dst = acc.data() + f * frame_size;
            for (std::size_t k = 0; k < frame_size; ++k) {
                dst[k] += weight * src[k];
            }
        }
    }
    VideoClip out(shape, 0.0f, window_outputs.front().fps());
    auto o = out.values();
    for (std::size_t k = 0; k < acc.size(); ++k) {
        o[k] = static_cast<float>(std::clamp(acc[k], 0.0, 1.0));
    }
    return out;
}

VideoClip run_windowed(const VideoClip& clip, const TriMask& trimask, const WindowProcessor& processor,
                       const WindowPlan& plan) {
    if (plan.total_frames != clip.frames()) {
        throw ShapeError("run_windowed: plan covers " + std::to_string(plan.total_frames) + " frames, clip has " +
                         std::to_string(clip.frames()));
    }
    require_same_shape(clip.shape(), trimask.shape(), "run_windowed: tri-mask");

    std::vector<VideoClip> outputs;
    outputs.reserve(plan.windows.size());
    for (std::size_t i = 0; i < plan.windows.size(); ++i) {
        const auto& w = plan.windows[i];
        const VideoClip slice = clip.slice(w.start, w.end);
        VideoClip result = processor(slice, trimask.slice(w.start, w.end), i);
        if (result.shape() != slice.shape()) {
            throw ShapeError("run_windowed: processor output for window " + std::to_string(i) + " has shape " +
                             result.shape().to_string() + ", expected " + slice.shape().to_string());
        }
        outputs.push_back(std::move(result));
    }
    return blend(plan, outputs);
}

}  // namespace layercomp
