// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

// Straightforward reference implementations used to cross-check the library. Each one is written
// the slow, obvious way and shares no code with src/.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "layercomp/video.hpp"

namespace oracle {

inline std::vector<float> random_values(std::mt19937_64& rng, std::size_t n, float lo = 0.0f, float hi = 1.0f) {
    std::uniform_real_distribution<float> dist(lo, hi);
    std::vector<float> v(n);
    for (auto& x : v) {
        x = dist(rng);
    }
    return v;
}

inline layercomp::VideoClip random_clip(std::mt19937_64& rng, layercomp::Shape shape) {
    return layercomp::VideoClip(shape, random_values(rng, shape.pixel_count() * 3));
}

inline layercomp::AlphaMatte random_alpha(std::mt19937_64& rng, layercomp::Shape shape) {
    return layercomp::AlphaMatte(shape, random_values(rng, shape.pixel_count()));
}

inline layercomp::BinaryMaskVideo random_mask(std::mt19937_64& rng, layercomp::Shape shape, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    std::vector<std::uint8_t> v(shape.pixel_count());
    for (auto& x : v) {
        x = coin(rng) ? 1 : 0;
    }
    return layercomp::BinaryMaskVideo(shape, std::move(v));
}

/// Gaussian values rounded to multiples of 1/1024, so small dyadic rescalings stay exact in float.
inline std::vector<float> dyadic_gaussian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<float> v(n);
    for (auto& x : v) {
        x = static_cast<float>(std::round(g(rng) * 1024.0) / 1024.0);
    }
    return v;
}

/// Positive scale k/8 with k in [1, 80]: exact when applied to dyadic_gaussian values.
inline float dyadic_scale(std::mt19937_64& rng) {
    return static_cast<float>(std::uniform_int_distribution<int>(1, 80)(rng)) / 8.0f;
}

/// Per-sample alpha blend in double.
inline std::vector<double> scalar_over(const layercomp::VideoClip& fg, const layercomp::AlphaMatte& alpha,
                                       const layercomp::VideoClip& bg) {
    std::vector<double> out;
    out.reserve(fg.values().size());
    for (std::size_t t = 0; t < fg.frames(); ++t) {
        for (std::size_t y = 0; y < fg.height(); ++y) {
            for (std::size_t x = 0; x < fg.width(); ++x) {
                const double a = alpha.at(t, y, x);
                for (std::size_t c = 0; c < 3; ++c) {
                    out.push_back(a * fg.at(t, y, x, c) + (1.0 - a) * bg.at(t, y, x, c));
                }
            }
        }
    }
    return out;
}

/// Level t maximizing between-class variance, class 0 = bins [0, t). Every candidate is
/// evaluated from scratch; the first maximum wins. Returns -1 when no split is valid.
inline int exhaustive_otsu(const std::array<std::uint64_t, 256>& hist) {
    int best = -1;
    long double best_var = -1.0L;
    for (int t = 1; t < 256; ++t) {
        long double n0 = 0, n1 = 0, s0 = 0, s1 = 0;
        for (int i = 0; i < 256; ++i) {
            if (i < t) {
                n0 += hist[i];
                s0 += static_cast<long double>(i) * hist[i];
            } else {
                n1 += hist[i];
                s1 += static_cast<long double>(i) * hist[i];
            }
        }
        if (n0 == 0 || n1 == 0) {
            continue;
        }
        const long double n = n0 + n1;
        const long double w0 = n0 / n, w1 = n1 / n;
        const long double d = s0 / n0 - s1 / n1;
        const long double var = w0 * w1 * d * d;
        if (var > best_var * (1.0L + 1e-12L)) {
            best_var = var;
            best = t;
        }
    }
    return best;
}

enum class Op { min, max, majority };

/// 3x3 (or k x k for majority) neighborhood operator applied once; out-of-frame pixels take
/// `border` for min/max and the nearest in-frame pixel for majority.
inline layercomp::BinaryMaskVideo neighborhood(const layercomp::BinaryMaskVideo& m, Op op, int k = 3,
                                               std::uint8_t border = 0) {
    layercomp::BinaryMaskVideo out(m.shape());
    const auto h = static_cast<long>(m.height());
    const auto w = static_cast<long>(m.width());
    const long r = k / 2;
    for (std::size_t t = 0; t < m.frames(); ++t) {
        for (long y = 0; y < h; ++y) {
            for (long x = 0; x < w; ++x) {
                int ones = 0, total = 0, lo = 1, hi = 0;
                for (long dy = -r; dy <= r; ++dy) {
                    for (long dx = -r; dx <= r; ++dx) {
                        long yy = y + dy, xx = x + dx;
                        int v;
                        if (yy < 0 || yy >= h || xx < 0 || xx >= w) {
                            if (op == Op::majority) {
                                yy = std::clamp(yy, 0L, h - 1);
                                xx = std::clamp(xx, 0L, w - 1);
                                v = m.at(t, yy, xx);
                            } else {
                                v = border;
                            }
                        } else {
                            v = m.at(t, yy, xx);
                        }
                        ones += v;
                        ++total;
                        lo = std::min(lo, v);
                        hi = std::max(hi, v);
                    }
                }
                std::uint8_t r_value = 0;
                switch (op) {
                    case Op::min: r_value = static_cast<std::uint8_t>(lo); break;
                    case Op::max: r_value = static_cast<std::uint8_t>(hi); break;
                    case Op::majority: r_value = 2 * ones > total ? 1 : 0; break;
                }
                out.at(t, y, x) = r_value;
            }
        }
    }
    return out;
}

inline layercomp::BinaryMaskVideo repeat(const layercomp::BinaryMaskVideo& m, Op op, int iters, std::uint8_t border) {
    layercomp::BinaryMaskVideo out = m;
    for (int i = 0; i < iters; ++i) {
        out = neighborhood(out, op, 3, border);
    }
    return out;
}

inline std::vector<double> luma(std::span<const float> rgb) {
    std::vector<double> y(rgb.size() / 3);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
    }
    return y;
}

/// Mean SSIM over the valid region, each window summed directly with a 2-D Gaussian kernel.
inline double direct_ssim(std::span<const float> a_rgb, std::span<const float> b_rgb, std::size_t h, std::size_t w,
                          int win = 11, double sigma = 1.5) {
    const auto a = luma(a_rgb);
    const auto b = luma(b_rgb);
    std::vector<double> kernel(static_cast<std::size_t>(win * win));
    double ksum = 0.0;
    const int r = win / 2;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            kernel[static_cast<std::size_t>((dy + r) * win + dx + r)] = v;
            ksum += v;
        }
    }
    for (auto& v : kernel) {
        v /= ksum;
    }
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t y0 = 0; y0 + win <= h; ++y0) {
        for (std::size_t x0 = 0; x0 + win <= w; ++x0) {
            double ma = 0, mb = 0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double k = kernel[static_cast<std::size_t>(i * win + j)];
                    ma += k * a[(y0 + i) * w + x0 + j];
                    mb += k * b[(y0 + i) * w + x0 + j];
                }
            }
            double va = 0, vb = 0, cov = 0;
            for (int i = 0; i < win; ++i) {
                for (int j = 0; j < win; ++j) {
                    const double k = kernel[static_cast<std::size_t>(i * win + j)];
                    const double da = a[(y0 + i) * w + x0 + j] - ma;
                    const double db = b[(y0 + i) * w + x0 + j] - mb;
                    va += k * da * da;
                    vb += k * db * db;
                    cov += k * da * db;
                }
            }
            total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

/// 100 * cos between (gt - over) and (gen - over), all in double.
inline double scalar_clip_dir(std::span<const float> gt, std::span<const float> over, std::span<const float> gen) {
    double dot = 0, n1 = 0, n2 = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const double d1 = static_cast<double>(gt[i]) - over[i];
        const double d2 = static_cast<double>(gen[i]) - over[i];
        dot += d1 * d2;
        n1 += d1 * d1;
        n2 += d2 * d2;
    }
    return 100.0 * dot / (std::sqrt(n1) * std::sqrt(n2));
}

/// Windows by brute force: start at 0, advance by stride, and when the next window would run
/// past the end, right-align a final window.
inline std::vector<std::pair<std::size_t, std::size_t>> enumerate_windows(std::size_t n, std::size_t window,
                                                                          std::size_t stride) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (n <= window) {
        out.emplace_back(0, n);
        return out;
    }
    std::size_t s = 0;
    while (true) {
        out.emplace_back(s, s + window);
        if (s + window >= n) {
            break;
        }
        if (s + stride + window > n) {
            out.emplace_back(n - window, n);
            break;
        }
        s += stride;
    }
    return out;
}

}  // namespace oracle
