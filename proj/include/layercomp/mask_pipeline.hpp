// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "layercomp/video.hpp"

namespace layercomp {

/// Morphological refinement applied after binarization, in the order
/// erode -> dilate -> median. The structuring element is a fixed 3x3 square.
struct MorphParams {
    static constexpr int max_iters = 16;

    int erode_iters = 0;
    int dilate_iters = 0;
    int median_kernel = 3;

    /// Throws ValidationError for negative or oversized counts and even kernels.
    void validate() const;

    bool operator==(const MorphParams&) const = default;
};

/// Value assumed for pixels outside the image during erosion/dilation.
enum class Border : std::uint8_t { zero = 0, one = 1 };

/// BT.601 luma: 0.299 r + 0.587 g + 0.114 b.
GrayVideo to_grayscale(const VideoClip& clip);

using Histogram = std::array<std::uint64_t, 256>;

/// 256-bin histogram over the whole video; level = round(255 * value).
Histogram histogram256(const GrayVideo& gray);

/// Otsu level t in [1, 255] on a histogram: class 0 holds bins < t. Ties resolve to the lowest t.
/// Throws DegenerateHistogramError when fewer than two bins are populated.
int otsu_level(const Histogram& histogram);

/// Gray threshold separating level t-1 from level t under round-to-nearest quantization.
float level_to_threshold(int level);

/// One global threshold for the whole video.
float otsu_threshold(const GrayVideo& gray);

/// pixel -> 1 iff gray > threshold.
BinaryMaskVideo binarize(const GrayVideo& gray, float threshold);

BinaryMaskVideo erode(const BinaryMaskVideo& mask, int iters, Border border = Border::zero);
BinaryMaskVideo dilate(const BinaryMaskVideo& mask, int iters, Border border = Border::zero);

/// Per-frame k x k majority vote with replicated borders; k must be odd, k = 1 is identity.
BinaryMaskVideo median_filter(const BinaryMaskVideo& mask, int kernel);

struct EffectMask {
    BinaryMaskVideo mask;
    /// Global Otsu threshold; empty when the difference histogram was degenerate.
    std::optional<float> threshold;
};

/// Difference -> grayscale -> Otsu -> binarize -> erode -> dilate -> median, then the subject
/// pixels are removed. A degenerate difference histogram yields an empty mask with a warning.
EffectMask derive_effect_mask(const VideoClip& gt, const VideoClip& over_clip, const BinaryMaskVideo& subject,
                              const MorphParams& params = {});

}  // namespace layercomp
