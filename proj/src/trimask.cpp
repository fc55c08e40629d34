// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/trimask.hpp"

#include <algorithm>
#include <random>

namespace layercomp {

const char* to_string(FrameState state) { return state == FrameState::annotated ? "annotated" : "unknown"; }

FrameState frame_state_from_string(const std::string& text) {
    if (text == "annotated") {
        return FrameState::annotated;
    }
    if (text == "unknown") {
        return FrameState::unknown;
    }
    throw ValidationError("unknown frame state '" + text + "'");
}

TriMask::TriMask(TriPixels pixels, std::vector<FrameState> states)
    : m_pixels(std::move(pixels)), m_states(std::move(states)) {
    if (m_states.size() != m_pixels.frames()) {
        throw ShapeError("tri-mask: " + std::to_string(m_states.size()) + " frame states for " +
                         std::to_string(m_pixels.frames()) + " frames");
    }
}

TriMask TriMask::uniform_unknown(Shape shape) {
    return TriMask(TriPixels(shape, kUnknown), std::vector<FrameState>(shape.frames, FrameState::unknown));
}

void TriMask::mark_unknown(std::size_t t) {
    auto f = m_pixels.frame(t);
    std::fill(f.begin(), f.end(), kUnknown);
    m_states.at(t) = FrameState::unknown;
}

TriMask TriMask::slice(std::size_t begin, std::size_t end) const {
    return TriMask(m_pixels.slice(begin, end),
                   std::vector<FrameState>(m_states.begin() + static_cast<std::ptrdiff_t>(begin),
                                           m_states.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::size_t TriMask::annotated_count() const {
    return static_cast<std::size_t>(std::count(m_states.begin(), m_states.end(), FrameState::annotated));
}

TriMask from_binary(const BinaryMaskVideo& mask) {
    require_binary(mask, "from_binary");
    TriPixels pixels(mask.shape());
    auto src = mask.values();
    auto dst = pixels.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] ? kEffect : kNoEffect;
    }
    return TriMask(std::move(pixels), std::vector<FrameState>(mask.frames(), FrameState::annotated));
}

BinaryMaskVideo to_binary(const TriMask& mask, bool require_annotated) {
    BinaryMaskVideo out(mask.shape());
    for (std::size_t t = 0; t < mask.frames(); ++t) {
        if (mask.state(t) == FrameState::unknown) {
            if (require_annotated) {
                throw ValidationError("to_binary: frame " + std::to_string(t) + " is unknown");
            }
            continue;
        }
        auto src = mask.pixels().frame(t);
        auto dst = out.frame(t);
        for (std::size_t i = 0; i < src.size(); ++i) {
            dst[i] = src[i] == kEffect ? 1 : 0;
        }
    }
    return out;
}

TriMask gray_augment(const TriMask& mask, double gray_prob, std::uint64_t seed) {
    if (!(gray_prob >= 0.0 && gray_prob <= 1.0)) {
        throw ValidationError("gray probability must be in [0,1], got " + std::to_string(gray_prob));
    }
    TriMask out = mask;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < out.frames(); ++t) {
        if (out.state(t) != FrameState::annotated) {
            continue;
        }
        // 53-bit uniform in [0,1); avoids implementation-defined distributions.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < gray_prob) {
            out.mark_unknown(t);
        }
    }
    return out;
}

TriMask expand_keyframes(const KeyframeSet& keys, std::size_t total_frames) {
    if (total_frames == 0) {
        throw ValidationError("expand_keyframes: total_frames must be >= 1");
    }
    const std::size_t ppf = keys.height * keys.width;
    for (std::size_t i = 0; i < keys.entries.size(); ++i) {
        const auto& k = keys.entries[i];
        if (k.index >= total_frames) {
            throw ValidationError("expand_keyframes: keyframe index " + std::to_string(k.index) + " out of range [0, " +
                                  std::to_string(total_frames) + ")");
        }
        if (i > 0 && k.index <= keys.entries[i - 1].index) {
            throw ValidationError("expand_keyframes: keyframe indices must be strictly increasing (index " +
                                  std::to_string(k.index) + " after " + std::to_string(keys.entries[i - 1].index) +
                                  ")");
        }
        if (k.mask.size() != ppf) {
            throw ShapeError("expand_keyframes: keyframe " + std::to_string(k.index) + " has " +
                             std::to_string(k.mask.size()) + " pixels, expected " + std::to_string(ppf));
        }
        if (std::any_of(k.mask.begin(), k.mask.end(), [](std::uint8_t v) { return v > 1; })) {
            throw ValidationError("expand_keyframes: keyframe " + std::to_string(k.index) + " mask is not binary");
        }
    }

    TriMask out = TriMask::uniform_unknown(Shape{total_frames, keys.height, keys.width});
    std::vector<FrameState> states(total_frames, FrameState::unknown);
    TriPixels pixels = out.pixels();
    for (const auto& k : keys.entries) {
        auto dst = pixels.frame(k.index);
        std::transform(k.mask.begin(), k.mask.end(), dst.begin(),
                       [](std::uint8_t v) { return v ? kEffect : kNoEffect; });
        states[k.index] = FrameState::annotated;
    }
    return TriMask(std::move(pixels), std::move(states));
}

KeyframeSet to_keyframes(const TriMask& mask) {
    KeyframeSet keys{mask.shape().height, mask.shape().width, {}};
    for (std::size_t t = 0; t < mask.frames(); ++t) {
        if (mask.state(t) != FrameState::annotated) {
            continue;
        }
        auto src = mask.pixels().frame(t);
        Keyframe k{t, std::vector<std::uint8_t>(src.size())};
        std::transform(src.begin(), src.end(), k.mask.begin(), [](std::uint8_t v) { return v == kEffect ? 1 : 0; });
        keys.entries.push_back(std::move(k));
    }
    return keys;
}

std::optional<TriMaskViolation> validate(const TriMask& mask) {
    const auto w = mask.shape().width;
    for (std::size_t t = 0; t < mask.frames(); ++t) {
        const bool annotated = mask.state(t) == FrameState::annotated;
        auto f = mask.pixels().frame(t);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const std::uint8_t v = f[i];
            const bool ok = annotated ? (v == kNoEffect || v == kEffect) : v == kUnknown;
            if (!ok) {
                return TriMaskViolation{
                    t, i / w, i % w, v,
                    std::string(annotated ? "annotated" : "unknown") + " frame " + std::to_string(t) +
                        " has pixel value " + std::to_string(v) + " at (" + std::to_string(i / w) + ", " +
                        std::to_string(i % w) + ")"};
            }
        }
    }
    return std::nullopt;
}

}  // namespace layercomp
