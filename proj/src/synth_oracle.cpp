// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/synth_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "layercomp/compose.hpp"
#include "layercomp/rng.hpp"

namespace layercomp {

std::pair<std::int64_t, std::int64_t> OracleScene::subject_origin(std::size_t t) const {
    const double td = static_cast<double>(t);
    return {static_cast<std::int64_t>(std::lround(start_x + velocity_x * td)),
            static_cast<std::int64_t>(std::lround(start_y + velocity_y * td))};
}

void OracleScene::validate() const {
    if (height == 0 || width == 0 || frames == 0) {
        throw ValidationError("oracle scene: resolution and frame count must be positive");
    }
    if (subject_width == 0 || subject_height == 0) {
        throw ValidationError("oracle scene: subject must have positive size");
    }
    if (!(kappa > 0.0f && kappa < 1.0f)) {
        throw ValidationError("oracle scene: kappa must be in (0,1), got " + std::to_string(kappa));
    }
    if (shadow_softness < 0.0f) {
        throw ValidationError("oracle scene: shadow softness must be non-negative");
    }
    if (background == BackgroundKind::checkerboard && checker_size == 0) {
        throw ValidationError("oracle scene: checker size must be positive");
    }
    for (std::size_t t = 0; t < frames; ++t) {
        const auto [x, y] = subject_origin(t);
        if (x < 0 || y < 0 || x + static_cast<std::int64_t>(subject_width) > static_cast<std::int64_t>(width) ||
            y + static_cast<std::int64_t>(subject_height) > static_cast<std::int64_t>(height)) {
            throw ValidationError("oracle scene: subject leaves the frame at t=" + std::to_string(t) + " (origin " +
                                  std::to_string(x) + ", " + std::to_string(y) + ")");
        }
    }
}

OracleScene OracleScene::random(std::uint64_t seed, std::size_t height, std::size_t width, std::size_t frames) {
    Rng rng(seed);
    const auto W = static_cast<std::int64_t>(width);
    const auto H = static_cast<std::int64_t>(height);
    auto scaled = [](std::int64_t extent, double f) { return std::max<std::int64_t>(1, std::lround(f * extent)); };

    OracleScene s;
    s.height = height;
    s.width = width;
    s.frames = frames;
    s.seed = seed;
    s.subject_width = static_cast<std::size_t>(rng.uniform_int(scaled(W, 0.22), scaled(W, 0.31)));
    s.subject_height = static_cast<std::size_t>(rng.uniform_int(scaled(H, 0.22), scaled(H, 0.31)));
    s.shadow_dx = static_cast<int>(rng.uniform_int(scaled(W, 0.08), scaled(W, 0.14)));
    s.shadow_dy = static_cast<int>(rng.uniform_int(scaled(H, 0.06), scaled(H, 0.11)));
    if (rng.uniform() < 0.5) {
        s.shadow_dx = -s.shadow_dx;
    }
    s.kappa = static_cast<float>(rng.uniform(0.35, 0.55));

    const std::int64_t travel_x = scaled(W, 0.19);
    const std::int64_t travel_y = scaled(H, 0.10);
    const std::int64_t margin = 2;
    const std::int64_t lo_x = std::max<std::int64_t>(margin, margin - s.shadow_dx);
    const std::int64_t hi_x =
        W - static_cast<std::int64_t>(s.subject_width) - margin - travel_x - std::max(s.shadow_dx, 0);
    const std::int64_t lo_y = margin;
    const std::int64_t hi_y = H - static_cast<std::int64_t>(s.subject_height) - margin - travel_y - s.shadow_dy;
    if (hi_x < lo_x || hi_y < lo_y) {
        throw ValidationError("oracle scene: frame " + std::to_string(height) + "x" + std::to_string(width) +
                              " too small for a random scene");
    }
    s.start_x = static_cast<double>(rng.uniform_int(lo_x, hi_x));
    s.start_y = static_cast<double>(rng.uniform_int(lo_y, hi_y));
    const double span = frames > 1 ? static_cast<double>(frames - 1) : 1.0;
    // Rounding of start + v*t stays within the travel budget.
    s.velocity_x = rng.uniform(0.0, static_cast<double>(travel_x) / span);
    s.velocity_y = rng.uniform(0.0, static_cast<double>(travel_y) / span);
    for (auto& c : s.subject_color) {
        c = static_cast<float>(rng.uniform(0.1, 0.9));
    }
    return s;
}

namespace {

std::array<float, 3> background_at(const OracleScene& s, std::size_t y, std::size_t x) {
    if (s.background == BackgroundKind::checkerboard) {
        const bool even = ((y / s.checker_size) + (x / s.checker_size)) % 2 == 0;
        return even ? s.color_a : s.color_b;
    }
    const float u = s.width > 1 ? static_cast<float>(x) / static_cast<float>(s.width - 1) : 0.0f;
    std::array<float, 3> c{};
    for (std::size_t i = 0; i < 3; ++i) {
        c[i] = s.color_a[i] + (s.color_b[i] - s.color_a[i]) * u;
    }
    return c;
}

// Distance from (x, y) to the half-open rectangle [x0, x1) x [y0, y1); zero inside.
double rect_distance(std::int64_t x, std::int64_t y, std::int64_t x0, std::int64_t y0, std::int64_t x1,
                     std::int64_t y1) {
    const double dx = static_cast<double>(std::max<std::int64_t>({x0 - x, 0, x - (x1 - 1)}));
    const double dy = static_cast<double>(std::max<std::int64_t>({y0 - y, 0, y - (y1 - 1)}));
    return std::hypot(dx, dy);
}

}  // namespace

OracleBundle generate(const OracleScene& scene) {
    scene.validate();
    const Shape shape{scene.frames, scene.height, scene.width};

    OracleBundle b;
    b.bg = VideoClip(shape);
    b.fg_star = VideoClip(shape);
    b.alpha = AlphaMatte(shape);
    b.subject_mask = BinaryMaskVideo(shape);
    b.effect_mask_truth = BinaryMaskVideo(shape);

    const float shadow_alpha = 1.0f - scene.kappa;
    const auto sw = static_cast<std::int64_t>(scene.subject_width);
    const auto sh = static_cast<std::int64_t>(scene.subject_height);

    for (std::size_t t = 0; t < scene.frames; ++t) {
        const auto [ox, oy] = scene.subject_origin(t);
        const std::int64_t sx = ox + scene.shadow_dx;
        const std::int64_t sy = oy + scene.shadow_dy;
        for (std::size_t y = 0; y < scene.height; ++y) {
            for (std::size_t x = 0; x < scene.width; ++x) {
                const auto bgc = background_at(scene, y, x);
                for (std::size_t c = 0; c < 3; ++c) {
                    b.bg.at(t, y, x, c) = bgc[c];
                }
                const auto xi = static_cast<std::int64_t>(x);
                const auto yi = static_cast<std::int64_t>(y);
                const bool in_subject = xi >= ox && xi < ox + sw && yi >= oy && yi < oy + sh;
                const bool in_shadow = xi >= sx && xi < sx + sw && yi >= sy && yi < sy + sh;

                if (in_subject) {
                    b.subject_mask.at(t, y, x) = 1;
                    b.alpha.at(t, y, x) = 1.0f;
                    for (std::size_t c = 0; c < 3; ++c) {
                        b.fg_star.at(t, y, x, c) = scene.subject_color[c];
                    }
                    continue;
                }
                // Shadow layer is black; its opacity 1 - kappa leaves kappa * bg.
                if (in_shadow) {
                    b.effect_mask_truth.at(t, y, x) = 1;
                    b.alpha.at(t, y, x) = shadow_alpha;
                } else if (scene.shadow_softness > 0.0f) {
                    const double d = rect_distance(xi, yi, sx, sy, sx + sw, sy + sh);
                    if (d <= 3.0 * scene.shadow_softness) {
                        b.alpha.at(t, y, x) =
                            shadow_alpha * static_cast<float>(std::exp(-0.5 * d * d / (scene.shadow_softness * scene.shadow_softness)));
                    }
                }
            }
        }
    }

    b.gt = over(b.fg_star, b.alpha, b.bg);
    b.over = compose_subject_over(b.fg_star, b.subject_mask, b.bg);
    return b;
}

OracleBundle perturb(OracleBundle bundle, double noise_sigma, double salt_pepper_frac, std::uint64_t seed) {
    if (noise_sigma < 0.0 || salt_pepper_frac < 0.0 || salt_pepper_frac > 1.0) {
        throw ValidationError("perturb: noise sigma must be >= 0 and salt-and-pepper fraction in [0,1]");
    }
    Rng rng(seed);
    auto gt = bundle.gt.values();
    if (noise_sigma > 0.0) {
        for (float& v : gt) {
            v = std::clamp(static_cast<float>(v + noise_sigma * rng.normal()), 0.0f, 1.0f);
        }
    }

    const std::size_t pixels = bundle.gt.shape().pixel_count();
    const auto flips = static_cast<std::size_t>(std::floor(salt_pepper_frac * static_cast<double>(pixels)));
    if (flips > 0) {
        // Partial Fisher-Yates: the first `flips` entries are a uniform sample without replacement.
        std::vector<std::size_t> order(pixels);
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < flips; ++i) {
            const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                    static_cast<std::int64_t>(pixels - 1)));
            std::swap(order[i], order[j]);
            const float value = rng.uniform() < 0.5 ? 0.0f : 1.0f;
            for (std::size_t c = 0; c < 3; ++c) {
                gt[order[i] * 3 + c] = value;
            }
        }
    }
    return bundle;
}

void to_json(nlohmann::json& j, const OracleScene& s) {
    j = nlohmann::json{
        {"height", s.height},
        {"width", s.width},
        {"frames", s.frames},
        {"subject", {{"width", s.subject_width},
                     {"height", s.subject_height},
                     {"start", {s.start_x, s.start_y}},
                     {"velocity", {s.velocity_x, s.velocity_y}},
                     {"color", s.subject_color}}},
        {"shadow", {{"offset", {s.shadow_dx, s.shadow_dy}}, {"kappa", s.kappa}, {"softness", s.shadow_softness}}},
        {"background", {{"kind", s.background == BackgroundKind::checkerboard ? "checkerboard" : "gradient"},
                        {"checker_size", s.checker_size},
                        {"color_a", s.color_a},
                        {"color_b", s.color_b}}},
        {"seed", s.seed},
    };
}

void from_json(const nlohmann::json& j, OracleScene& s) {
    s = OracleScene{};
    s.height = j.value("height", s.height);
    s.width = j.value("width", s.width);
    s.frames = j.value("frames", s.frames);
    s.seed = j.value("seed", s.seed);
    if (auto it = j.find("subject"); it != j.end()) {
        const auto& sub = *it;
        s.subject_width = sub.value("width", s.subject_width);
        s.subject_height = sub.value("height", s.subject_height);
        if (sub.contains("start")) {
            s.start_x = sub.at("start").at(0).get<double>();
            s.start_y = sub.at("start").at(1).get<double>();
        }
        if (sub.contains("velocity")) {
            s.velocity_x = sub.at("velocity").at(0).get<double>();
            s.velocity_y = sub.at("velocity").at(1).get<double>();
        }
        s.subject_color = sub.value("color", s.subject_color);
    }
    if (auto it = j.find("shadow"); it != j.end()) {
        const auto& sh = *it;
        if (sh.contains("offset")) {
            s.shadow_dx = sh.at("offset").at(0).get<int>();
            s.shadow_dy = sh.at("offset").at(1).get<int>();
        }
        s.kappa = sh.value("kappa", s.kappa);
        s.shadow_softness = sh.value("softness", s.shadow_softness);
    }
    if (auto it = j.find("background"); it != j.end()) {
        const auto& bg = *it;
        const std::string kind = bg.value("kind", std::string("checkerboard"));
        if (kind == "checkerboard") {
            s.background = BackgroundKind::checkerboard;
        } else if (kind == "gradient") {
            s.background = BackgroundKind::gradient;
        } else {
            throw ValidationError("oracle scene: unknown background kind '" + kind + "'");
        }
        s.checker_size = bg.value("checker_size", s.checker_size);
        s.color_a = bg.value("color_a", s.color_a);
        s.color_b = bg.value("color_b", s.color_b);
    }
}

}  // namespace layercomp
