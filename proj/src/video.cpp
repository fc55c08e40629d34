// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/video.hpp"

#include <algorithm>
#include <cmath>

#include "layercomp/log.hpp"

namespace layercomp {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::shape: return "shape";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::data_quality: return "data_quality";
        case ErrorKind::provider: return "provider";
    }
    return "unknown";
}

std::string Shape::to_string() const {
    return std::to_string(frames) + "x" + std::to_string(height) + "x" + std::to_string(width);
}

namespace {

void check_axis(std::size_t expected, std::size_t actual, const char* axis, std::string_view what) {
    if (expected != actual) {
        throw ShapeError(std::string(what) + ": " + axis + " mismatch (expected " + std::to_string(expected) +
                         ", got " + std::to_string(actual) + ")");
    }
}

}  // namespace

void require_same_shape(const Shape& expected, const Shape& actual, std::string_view what) {
    check_axis(expected.frames, actual.frames, "frames", what);
    require_same_frame_size(expected, actual, what);
}

void require_same_frame_size(const Shape& expected, const Shape& actual, std::string_view what) {
    check_axis(expected.height, actual.height, "height", what);
    check_axis(expected.width, actual.width, "width", what);
}

std::size_t clamp_unit_interval(std::span<float> values, std::string_view what) {
    std::size_t clamped = 0;
    for (float& v : values) {
        if (std::isnan(v)) {
            throw ValidationError(std::string(what) + ": NaN sample");
        }
        if (v < 0.0f || v > 1.0f) {
            v = std::clamp(v, 0.0f, 1.0f);
            ++clamped;
        }
    }
    if (clamped > 0) {
        log().warn("{}: clamped {} out-of-range samples to [0,1]", what, clamped);
    }
    return clamped;
}

VideoClip VideoClip::ingest(Shape shape, std::vector<float> data, FrameRate fps) {
    VideoClip clip(shape, std::move(data), fps);
    clip.set_fps(fps);
    clamp_unit_interval(clip.values(), "video clip");
    return clip;
}

void VideoClip::set_fps(FrameRate fps) {
    if (fps.num <= 0 || fps.den <= 0) {
        throw ValidationError("frame rate must be positive, got " + std::to_string(fps.num) + "/" +
                              std::to_string(fps.den));
    }
    m_fps = fps;
}

AlphaMatte ingest_alpha(Shape shape, std::vector<float> data) {
    AlphaMatte alpha(shape, std::move(data));
    clamp_unit_interval(alpha.values(), "alpha matte");
    return alpha;
}

void require_binary(const BinaryMaskVideo& mask, std::string_view what) {
    const auto values = mask.values();
    auto bad = std::find_if(values.begin(), values.end(), [](std::uint8_t v) { return v > 1; });
    if (bad != values.end()) {
        const auto offset = static_cast<std::size_t>(bad - values.begin());
        const auto ppf = mask.shape().pixels_per_frame();
        throw ValidationError(std::string(what) + ": non-binary value " + std::to_string(*bad) + " at frame " +
                              std::to_string(offset / ppf) + ", pixel " + std::to_string(offset % ppf));
    }
}

BinaryMaskVideo make_binary_mask(Shape shape, std::vector<std::uint8_t> data) {
    BinaryMaskVideo mask(shape, std::move(data));
    require_binary(mask, "binary mask");
    return mask;
}

BinaryMaskVideo complement(const BinaryMaskVideo& mask) {
    BinaryMaskVideo out(mask.shape());
    auto src = mask.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = static_cast<std::uint8_t>(1 - src[i]);
    }
    return out;
}

double iou(const BinaryMaskVideo& a, const BinaryMaskVideo& b) {
    require_same_shape(a.shape(), b.shape(), "iou");
    std::size_t inter = 0;
    std::size_t uni = 0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) {
        inter += (av[i] & bv[i]);
        uni += (av[i] | bv[i]);
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace layercomp
