// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layercomp/error.hpp"

namespace layercomp {

/// Dimensions shared by every frame-stacked container: T x H x W.
struct Shape {
    std::size_t frames = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t pixels_per_frame() const noexcept { return height * width; }
    std::size_t pixel_count() const noexcept { return frames * height * width; }
    bool empty() const noexcept { return pixel_count() == 0; }

    bool operator==(const Shape&) const = default;

    std::string to_string() const;
};

/// Throws ShapeError naming the first differing axis.
void require_same_shape(const Shape& expected, const Shape& actual, std::string_view what);

/// Throws ShapeError if height/width differ (frame counts may differ).
void require_same_frame_size(const Shape& expected, const Shape& actual, std::string_view what);

struct FrameRate {
    std::int64_t num = 24;
    std::int64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const FrameRate&) const = default;
};

/// Dense T x H x W x C storage, row-major with interleaved channels.
/// The tag keeps semantically different single-channel volumes (alpha, gray) distinct types.
template <typename T, std::size_t Channels, typename Tag>
class FrameStack {
public:
    using value_type = T;
    static constexpr std::size_t channels = Channels;

    FrameStack() = default;

    explicit FrameStack(Shape shape, T fill = T{}) : m_shape(shape), m_data(shape.pixel_count() * Channels, fill) {}

    FrameStack(Shape shape, std::vector<T> data) : m_shape(shape), m_data(std::move(data)) {
        if (m_data.size() != shape.pixel_count() * Channels) {
            throw ShapeError("buffer holds " + std::to_string(m_data.size()) + " values, shape " + shape.to_string() +
                             " needs " + std::to_string(shape.pixel_count() * Channels));
        }
    }

    const Shape& shape() const noexcept { return m_shape; }
    std::size_t frames() const noexcept { return m_shape.frames; }
    std::size_t height() const noexcept { return m_shape.height; }
    std::size_t width() const noexcept { return m_shape.width; }

    std::size_t frame_size() const noexcept { return m_shape.pixels_per_frame() * Channels; }

    std::span<T> frame(std::size_t t) { return {m_data.data() + t * frame_size(), frame_size()}; }
    std::span<const T> frame(std::size_t t) const { return {m_data.data() + t * frame_size(), frame_size()}; }

    T& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c = 0) { return m_data[index(t, y, x, c)]; }
    const T& at(std::size_t t, std::size_t y, std::size_t x, std::size_t c = 0) const {
        return m_data[index(t, y, x, c)];
    }

    std::span<T> values() noexcept { return m_data; }
    std::span<const T> values() const noexcept { return m_data; }

    /// Frames [begin, end) as a new stack.
    FrameStack slice(std::size_t begin, std::size_t end) const {
        Shape s{end - begin, m_shape.height, m_shape.width};
        return FrameStack(s, std::vector<T>(m_data.begin() + begin * frame_size(), m_data.begin() + end * frame_size()));
    }

    bool operator==(const FrameStack&) const = default;

private:
    std::size_t index(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const noexcept {
        return ((t * m_shape.height + y) * m_shape.width + x) * Channels + c;
    }

    Shape m_shape;
    std::vector<T> m_data;
};

struct AlphaTag;
struct GrayTag;
struct BinaryTag;
struct RgbTag;

/// Per-pixel opacity in [0,1].
using AlphaMatte = FrameStack<float, 1, AlphaTag>;
/// Single-channel intensity in [0,1].
using GrayVideo = FrameStack<float, 1, GrayTag>;
/// Values strictly in {0,1}.
using BinaryMaskVideo = FrameStack<std::uint8_t, 1, BinaryTag>;

/// Read-only view of one straight RGB frame.
struct RgbFrameView {
    std::span<const float> pixels;
    std::size_t height = 0;
    std::size_t width = 0;
};

/// T x H x W x 3 float frames in [0,1], sRGB.
class VideoClip : public FrameStack<float, 3, RgbTag> {
public:
    using Base = FrameStack<float, 3, RgbTag>;

    VideoClip() = default;
    explicit VideoClip(Shape shape, float fill = 0.0f, FrameRate fps = {}) : Base(shape, fill), m_fps(fps) {}
    VideoClip(Shape shape, std::vector<float> data, FrameRate fps = {}) : Base(shape, std::move(data)), m_fps(fps) {}

    /// Builds a clip from untrusted values: out-of-range samples are clamped with a logged
    /// warning, NaN is rejected.
    static VideoClip ingest(Shape shape, std::vector<float> data, FrameRate fps = {});

    const FrameRate& fps() const noexcept { return m_fps; }
    void set_fps(FrameRate fps);

    RgbFrameView frame_view(std::size_t t) const { return {frame(t), height(), width()}; }

    VideoClip slice(std::size_t begin, std::size_t end) const {
        VideoClip out;
        static_cast<Base&>(out) = Base::slice(begin, end);
        out.m_fps = m_fps;
        return out;
    }

    bool operator==(const VideoClip&) const = default;

private:
    FrameRate m_fps;
};

/// Clamps every value into [0,1]; returns how many were changed. Throws ValidationError on NaN.
std::size_t clamp_unit_interval(std::span<float> values, std::string_view what);

AlphaMatte ingest_alpha(Shape shape, std::vector<float> data);

/// Throws ValidationError at the first value outside {0,1}.
BinaryMaskVideo make_binary_mask(Shape shape, std::vector<std::uint8_t> data);

/// Validates an existing mask in place of construction.
void require_binary(const BinaryMaskVideo& mask, std::string_view what);

BinaryMaskVideo complement(const BinaryMaskVideo& mask);

/// Intersection over union; two empty masks score 1.
double iou(const BinaryMaskVideo& a, const BinaryMaskVideo& b);

}  // namespace layercomp
