// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "layercomp/video.hpp"

namespace layercomp {

/// 8-bit pixel codes of a tri-state conditioning mask.
inline constexpr std::uint8_t kNoEffect = 0;
inline constexpr std::uint8_t kUnknown = 128;
inline constexpr std::uint8_t kEffect = 255;

enum class FrameState : std::uint8_t { annotated, unknown };

const char* to_string(FrameState state);
FrameState frame_state_from_string(const std::string& text);

struct TriTag;
using TriPixels = FrameStack<std::uint8_t, 1, TriTag>;

/// Conditioning mask with a per-frame annotation state.
///
/// An unknown frame is uniformly kUnknown; an annotated frame holds only kNoEffect / kEffect.
/// Construction does not enforce this; call validate() on untrusted data.
class TriMask {
public:
    TriMask() = default;
    TriMask(TriPixels pixels, std::vector<FrameState> states);

    /// Every frame unknown.
    static TriMask uniform_unknown(Shape shape);

    const Shape& shape() const noexcept { return m_pixels.shape(); }
    std::size_t frames() const noexcept { return m_pixels.frames(); }

    const TriPixels& pixels() const noexcept { return m_pixels; }
    TriPixels& pixels() noexcept { return m_pixels; }
    const std::vector<FrameState>& states() const noexcept { return m_states; }
    FrameState state(std::size_t t) const { return m_states.at(t); }

    /// Replaces frame t with a uniform unknown frame.
    void mark_unknown(std::size_t t);

    TriMask slice(std::size_t begin, std::size_t end) const;

    std::size_t annotated_count() const;

    bool operator==(const TriMask&) const = default;

private:
    TriPixels m_pixels;
    std::vector<FrameState> m_states;
};

TriMask from_binary(const BinaryMaskVideo& mask);

/// Inverse of from_binary. Unknown frames come back as zeros; throws ValidationError if
/// require_annotated is set and any frame is unknown.
BinaryMaskVideo to_binary(const TriMask& mask, bool require_annotated = false);

/// Each annotated frame independently becomes unknown with probability gray_prob.
/// Deterministic in seed.
TriMask gray_augment(const TriMask& mask, double gray_prob, std::uint64_t seed);

struct Keyframe {
    std::size_t index = 0;
    std::vector<std::uint8_t> mask;  // H*W binary values

    bool operator==(const Keyframe&) const = default;
};

/// Sparse annotations on a handful of frames of one clip.
struct KeyframeSet {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<Keyframe> entries;  // strictly increasing indices

    bool operator==(const KeyframeSet&) const = default;
};

/// Keyframes become annotated frames; all others are uniform unknown. No pixel interpolation.
TriMask expand_keyframes(const KeyframeSet& keys, std::size_t total_frames);

/// Annotated frames of a mask as keyframes.
KeyframeSet to_keyframes(const TriMask& mask);

struct TriMaskViolation {
    std::size_t frame = 0;
    std::size_t y = 0;
    std::size_t x = 0;
    std::uint8_t value = 0;
    std::string message;
};

/// First violation of the per-state pixel rules, if any.
std::optional<TriMaskViolation> validate(const TriMask& mask);

}  // namespace layercomp
