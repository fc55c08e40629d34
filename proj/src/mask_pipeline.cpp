// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/mask_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "layercomp/compose.hpp"
#include "layercomp/log.hpp"

namespace layercomp {

void MorphParams::validate() const {
    auto check_iters = [](int v, const char* name) {
        if (v < 0 || v > max_iters) {
            throw ValidationError(std::string(name) + " must be in [0, " + std::to_string(max_iters) + "], got " +
                                  std::to_string(v));
        }
    };
    check_iters(erode_iters, "erode iterations");
    check_iters(dilate_iters, "dilate iterations");
    if (median_kernel < 1 || median_kernel % 2 == 0) {
        throw ValidationError("median kernel must be odd and >= 1, got " + std::to_string(median_kernel));
    }
}

GrayVideo to_grayscale(const VideoClip& clip) {
    GrayVideo gray(clip.shape());
    auto src = clip.values();
    auto dst = gray.values();
    for (std::size_t p = 0; p < dst.size(); ++p) {
        const float y = 0.299f * src[p * 3] + 0.587f * src[p * 3 + 1] + 0.114f * src[p * 3 + 2];
        dst[p] = std::clamp(y, 0.0f, 1.0f);
    }
    return gray;
}

Histogram histogram256(const GrayVideo& gray) {
    Histogram h{};
    for (float v : gray.values()) {
        const auto level = static_cast<std::size_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
        ++h[level];
    }
    return h;
}

int otsu_level(const Histogram& histogram) {
    std::uint64_t total = 0;
    int populated = 0;
    for (auto c : histogram) {
        total += c;
        populated += c > 0 ? 1 : 0;
    }
    if (populated < 2) {
        throw DegenerateHistogramError("histogram has " + std::to_string(populated) +
                                       " populated level(s); Otsu needs at least two");
    }

    // Probabilities first: count scaling then leaves every later value bit-identical.
    std::array<double, 256> p{};
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = static_cast<double>(histogram[i]) / static_cast<double>(total);
    }
    double mean_total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        mean_total += static_cast<double>(i) * p[i];
    }

    int best_level = -1;
    double best_var = -1.0;
    double omega = 0.0;
    double mu = 0.0;
    std::uint64_t below = 0;
    for (int t = 1; t < 256; ++t) {
        omega += p[t - 1];
        mu += static_cast<double>(t - 1) * p[t - 1];
        below += histogram[t - 1];
        if (below == 0 || below == total) {
            continue;
        }
        const double num = mean_total * omega - mu;
        const double var = num * num / (omega * (1.0 - omega));
        if (var > best_var) {
            best_var = var;
            best_level = t;
        }
    }
    return best_level;
}

float level_to_threshold(int level) { return (static_cast<float>(level) - 0.5f) / 255.0f; }

float otsu_threshold(const GrayVideo& gray) { return level_to_threshold(otsu_level(histogram256(gray))); }

BinaryMaskVideo binarize(const GrayVideo& gray, float threshold) {
    BinaryMaskVideo mask(gray.shape());
    auto src = gray.values();
    auto dst = mask.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = src[i] > threshold ? 1 : 0;
    }
    return mask;
}

namespace {

// One 3x3 min (erode) or max (dilate) pass on a frame, separable by rows then columns.
template <typename Reduce>
void square_pass(std::span<const std::uint8_t> src, std::span<std::uint8_t> dst, std::size_t h, std::size_t w,
                 std::uint8_t outside, Reduce reduce, std::vector<std::uint8_t>& scratch) {
    scratch.resize(h * w);
    for (std::size_t y = 0; y < h; ++y) {
        const auto* row = src.data() + y * w;
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint8_t left = x > 0 ? row[x - 1] : outside;
            const std::uint8_t right = x + 1 < w ? row[x + 1] : outside;
            scratch[y * w + x] = reduce(reduce(left, row[x]), right);
        }
    }
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint8_t up = y > 0 ? scratch[(y - 1) * w + x] : outside;
            const std::uint8_t down = y + 1 < h ? scratch[(y + 1) * w + x] : outside;
            dst[y * w + x] = reduce(reduce(up, scratch[y * w + x]), down);
        }
    }
}

template <typename Reduce>
BinaryMaskVideo morph(const BinaryMaskVideo& mask, int iters, Border border, Reduce reduce, const char* name) {
    if (iters < 0) {
        throw ValidationError(std::string(name) + " iterations must be non-negative");
    }
    BinaryMaskVideo out = mask;
    if (iters == 0 || mask.shape().empty()) {
        return out;
    }
    const auto h = mask.height();
    const auto w = mask.width();
    const auto outside = static_cast<std::uint8_t>(border);
    std::vector<std::uint8_t> scratch;
    std::vector<std::uint8_t> tmp(h * w);
    for (std::size_t t = 0; t < mask.frames(); ++t) {
        auto frame = out.frame(t);
        for (int i = 0; i < iters; ++i) {
            square_pass(frame, tmp, h, w, outside, reduce, scratch);
            std::copy(tmp.begin(), tmp.end(), frame.begin());
        }
    }
    return out;
}

}  // namespace

BinaryMaskVideo erode(const BinaryMaskVideo& mask, int iters, Border border) {
    return morph(mask, iters, border, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); }, "erode");
}

BinaryMaskVideo dilate(const BinaryMaskVideo& mask, int iters, Border border) {
    return morph(mask, iters, border, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); }, "dilate");
}

BinaryMaskVideo median_filter(const BinaryMaskVideo& mask, int kernel) {
    if (kernel < 1 || kernel % 2 == 0) {
        throw ValidationError("median kernel must be odd and >= 1, got " + std::to_string(kernel));
    }
    BinaryMaskVideo out = mask;
    if (kernel == 1 || mask.shape().empty()) {
        return out;
    }
    const auto h = static_cast<std::ptrdiff_t>(mask.height());
    const auto w = static_cast<std::ptrdiff_t>(mask.width());
    const std::ptrdiff_t r = kernel / 2;
    const int majority = kernel * kernel / 2;
    std::vector<int> row_counts(static_cast<std::size_t>(h * w));

    // Replicated borders keep the box count separable: clamp x for the row pass, y for the column pass.
    for (std::size_t t = 0; t < mask.frames(); ++t) {
        auto src = mask.frame(t);
        auto dst = out.frame(t);
        for (std::ptrdiff_t y = 0; y < h; ++y) {
            for (std::ptrdiff_t x = 0; x < w; ++x) {
                int count = 0;
                for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                    count += src[y * w + std::clamp(x + dx, std::ptrdiff_t{0}, w - 1)];
                }
                row_counts[y * w + x] = count;
            }
        }
        for (std::ptrdiff_t y = 0; y < h; ++y) {
            for (std::ptrdiff_t x = 0; x < w; ++x) {
                int count = 0;
                for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
                    count += row_counts[std::clamp(y + dy, std::ptrdiff_t{0}, h - 1) * w + x];
                }
                dst[y * w + x] = count > majority ? 1 : 0;
            }
        }
    }
    return out;
}

EffectMask derive_effect_mask(const VideoClip& gt, const VideoClip& over_clip, const BinaryMaskVideo& subject,
                              const MorphParams& params) {
    params.validate();
    require_same_shape(gt.shape(), subject.shape(), "derive_effect_mask: subject mask");
    require_binary(subject, "derive_effect_mask: subject mask");

    const GrayVideo gray = to_grayscale(diff_delta(gt, over_clip));

    EffectMask result;
    try {
        result.threshold = otsu_threshold(gray);
    } catch (const DegenerateHistogramError& e) {
        log().warn("effect mask: {}; falling back to an empty mask", e.what());
        result.mask = BinaryMaskVideo(gt.shape());
        return result;
    }

    BinaryMaskVideo mask = binarize(gray, *result.threshold);
    mask = erode(mask, params.erode_iters);
    mask = dilate(mask, params.dilate_iters);
    mask = median_filter(mask, params.median_kernel);

    auto m = mask.values();
    auto s = subject.values();
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] &= static_cast<std::uint8_t>(1 - s[i]);
    }
    result.mask = std::move(mask);
    return result;
}

}  // namespace layercomp
