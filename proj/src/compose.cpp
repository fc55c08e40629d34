// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/compose.hpp"

#include <algorithm>
#include <cmath>

namespace layercomp {

VideoClip over(const VideoClip& fg, const AlphaMatte& alpha, const VideoClip& bg) {
    require_same_shape(fg.shape(), bg.shape(), "over: background");
    require_same_shape(fg.shape(), alpha.shape(), "over: alpha");

    VideoClip out(fg.shape(), 0.0f, fg.fps());
    auto f = fg.values();
    auto b = bg.values();
    auto a = alpha.values();
    auto o = out.values();
    for (std::size_t p = 0; p < a.size(); ++p) {
        const float w = a[p];
        const float rest = 1.0f - w;
        for (std::size_t c = 0; c < 3; ++c) {
            const std::size_t i = p * 3 + c;
            o[i] = std::clamp(w * f[i] + rest * b[i], 0.0f, 1.0f);
        }
    }
    return out;
}

VideoClip compose_subject_over(const VideoClip& fg_star, const BinaryMaskVideo& subject, const VideoClip& bg) {
    require_same_shape(fg_star.shape(), bg.shape(), "compose_subject_over: background");
    require_same_shape(fg_star.shape(), subject.shape(), "compose_subject_over: subject mask");
    require_binary(subject, "compose_subject_over: subject mask");

    VideoClip out(fg_star.shape(), 0.0f, fg_star.fps());
    auto f = fg_star.values();
    auto b = bg.values();
    auto m = subject.values();
    auto o = out.values();
    for (std::size_t p = 0; p < m.size(); ++p) {
        const auto& src = m[p] ? f : b;
        std::copy_n(src.begin() + p * 3, 3, o.begin() + p * 3);
    }
    return out;
}

VideoClip diff_delta(const VideoClip& a, const VideoClip& b) {
    require_same_shape(a.shape(), b.shape(), "diff_delta");
    VideoClip out(a.shape(), 0.0f, a.fps());
    auto av = a.values();
    auto bv = b.values();
    auto o = out.values();
    for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = std::fabs(av[i] - bv[i]);
    }
    return out;
}

ResidualStats recompose_check(const VideoClip& fg_star, const AlphaMatte& alpha, const VideoClip& bg,
                              const VideoClip& gt) {
    require_same_shape(gt.shape(), fg_star.shape(), "recompose_check: foreground");
    const VideoClip rebuilt = over(fg_star, alpha, bg);

    ResidualStats stats;
    auto r = rebuilt.values();
    auto g = gt.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = std::fabs(static_cast<double>(r[i]) - static_cast<double>(g[i]));
        sum += e;
        stats.max_abs = std::max(stats.max_abs, e);
    }
    stats.mean_abs = r.empty() ? 0.0 : sum / static_cast<double>(r.size());
    return stats;
}

VideoClip unpremultiply(const VideoClip& premultiplied, const AlphaMatte& alpha) {
    require_same_shape(premultiplied.shape(), alpha.shape(), "unpremultiply");
    VideoClip out(premultiplied.shape(), 0.0f, premultiplied.fps());
    auto src = premultiplied.values();
    auto a = alpha.values();
    auto o = out.values();
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (a[p] <= 0.0f) {
            continue;
        }
        for (std::size_t c = 0; c < 3; ++c) {
            o[p * 3 + c] = std::clamp(src[p * 3 + c] / a[p], 0.0f, 1.0f);
        }
    }
    return out;
}

RgbaPixel composite_over(const RgbaPixel& top, const RgbaPixel& bottom) {
    RgbaPixel out;
    const float below = bottom.alpha * (1.0f - top.alpha);
    out.alpha = top.alpha + below;
    if (out.alpha <= 0.0f) {
        return out;
    }
    for (std::size_t c = 0; c < 3; ++c) {
        out.color[c] = (top.color[c] * top.alpha + bottom.color[c] * below) / out.alpha;
    }
    return out;
}

}  // namespace layercomp
