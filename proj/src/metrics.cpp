// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "layercomp/log.hpp"

namespace layercomp {
namespace {

void require_same_frame(const RgbFrameView& a, const RgbFrameView& b, const char* what) {
    if (a.height != b.height || a.width != b.width || a.pixels.size() != b.pixels.size()) {
        throw ShapeError(std::string(what) + ": frames differ in size (" + std::to_string(a.height) + "x" +
                         std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" + std::to_string(b.width) +
                         ")");
    }
}

std::vector<double> luma(const RgbFrameView& f) {
    std::vector<double> y(f.height * f.width);
    for (std::size_t p = 0; p < y.size(); ++p) {
        y[p] = 0.299 * f.pixels[p * 3] + 0.587 * f.pixels[p * 3 + 1] + 0.114 * f.pixels[p * 3 + 2];
    }
    return y;
}

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        k[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (auto& v : k) {
        v /= sum;
    }
    return k;
}

// Valid-region separable filtering: out is (h - n + 1) x (w - n + 1).
std::vector<double> filter_valid(const std::vector<double>& img, std::size_t h, std::size_t w,
                                 const std::vector<double>& k) {
    const std::size_t n = k.size();
    const std::size_t ow = w - n + 1;
    const std::size_t oh = h - n + 1;
    std::vector<double> rows(h * ow);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += k[i] * img[y * w + x + i];
            }
            rows[y * ow + x] = acc;
        }
    }
    std::vector<double> out(oh * ow);
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += k[i] * rows[(y + i) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    return out;
}

}  // namespace

double ssim(const RgbFrameView& a, const RgbFrameView& b, const SsimParams& params) {
    require_same_frame(a, b, "ssim");
    const auto n = static_cast<std::size_t>(params.window);
    if (params.window < 1 || a.height < n || a.width < n) {
        throw ShapeError("ssim: frame " + std::to_string(a.height) + "x" + std::to_string(a.width) +
                         " is smaller than the " + std::to_string(params.window) + "x" +
                         std::to_string(params.window) + " window");
    }
    const std::size_t h = a.height;
    const std::size_t w = a.width;
    const auto ya = luma(a);
    const auto yb = luma(b);
    std::vector<double> aa(ya.size()), bb(ya.size()), ab(ya.size());
    for (std::size_t i = 0; i < ya.size(); ++i) {
        aa[i] = ya[i] * ya[i];
        bb[i] = yb[i] * yb[i];
        ab[i] = ya[i] * yb[i];
    }
    const auto k = gaussian_kernel(params.window, params.sigma);
    const auto mu_a = filter_valid(ya, h, w, k);
    const auto mu_b = filter_valid(yb, h, w, k);
    const auto e_aa = filter_valid(aa, h, w, k);
    const auto e_bb = filter_valid(bb, h, w, k);
    const auto e_ab = filter_valid(ab, h, w, k);

    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
    double sum = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i];
        const double mb = mu_b[i];
        const double va = e_aa[i] - ma * ma;
        const double vb = e_bb[i] - mb * mb;
        const double cov = e_ab[i] - ma * mb;
        sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return sum / static_cast<double>(mu_a.size());
}

double psnr(const RgbFrameView& a, const RgbFrameView& b) {
    require_same_frame(a, b, "psnr");
    if (a.pixels.empty()) {
        throw ShapeError("psnr: empty frame");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(a.pixels.size());
    if (mse == 0.0) {
        return kPsnrCapDb;
    }
    return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / mse));
}

std::size_t MetricSeries::available() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

std::optional<double> MetricSeries::mean() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(n);
}

nlohmann::ordered_json MetricReport::to_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["provider"] = provider.empty() ? ordered_json(nullptr) : ordered_json(provider);
    j["clip_ids"] = ordered_json::object();
    for (const auto& [k, v] : clip_ids) {
        j["clip_ids"][k] = v;
    }
    j["frames"] = frames;
    j["input_frames"] = input_frames;

    ordered_json means = ordered_json::object();
    ordered_json series = ordered_json::object();
    ordered_json missing = ordered_json::object();
    for (const auto& [name, s] : metrics) {
        const auto m = s.mean();
        means[name] = m ? ordered_json(*m) : ordered_json(nullptr);
        ordered_json values = ordered_json::array();
        for (const auto& v : s.values) {
            values.push_back(v ? ordered_json(*v) : ordered_json(nullptr));
        }
        series[name] = std::move(values);
        missing[name] = s.missing();
    }
    j["mean"] = std::move(means);
    j["missing"] = std::move(missing);
    j["per_frame"] = std::move(series);

    ordered_json issues_json = ordered_json::array();
    for (const auto& issue : issues) {
        issues_json.push_back(
            {{"frame", issue.frame}, {"metric", issue.metric}, {"error", issue.error}, {"detail", issue.detail}});
    }
    j["issues"] = std::move(issues_json);

    ordered_json external = ordered_json::object();
    for (const auto& name : kExternalMetricSlots) {
        external[name] = nullptr;
    }
    j["external"] = std::move(external);
    return j;
}

MetricReport evaluate_pair(const VideoClip& gt, const VideoClip& over_clip, const VideoClip& gen,
                           EmbeddingProvider* provider, const EvaluateOptions& options) {
    require_same_frame_size(gt.shape(), over_clip.shape(), "evaluate_pair: composite clip");
    require_same_frame_size(gt.shape(), gen.shape(), "evaluate_pair: generated clip");

    MetricReport report;
    report.clip_ids = options.clip_ids;
    report.input_frames = std::max({gt.frames(), over_clip.frames(), gen.frames()});
    report.frames = std::min({gt.frames(), over_clip.frames(), gen.frames()});
    if (report.frames != report.input_frames) {
        log().warn("evaluate_pair: trimming clips of {}/{}/{} frames to {}", gt.frames(), over_clip.frames(),
                   gen.frames(), report.frames);
    }
    const std::size_t n = report.frames;

    auto& ssim_series = report.metrics["ssim"].values;
    auto& psnr_series = report.metrics["psnr"].values;
    for (std::size_t t = 0; t < n; ++t) {
        ssim_series.emplace_back(ssim(gen.frame_view(t), gt.frame_view(t)));
        psnr_series.emplace_back(psnr(gen.frame_view(t), gt.frame_view(t)));
    }
    if (provider == nullptr) {
        return report;
    }

    report.provider = provider->identity();
    auto& dir_series = report.metrics["clip_dir"].values;
    auto& img_series = report.metrics["clip_img"].values;
    dir_series.assign(n, std::nullopt);
    img_series.assign(n, std::nullopt);

    std::optional<EmbeddingVector> text_embedding;
    std::vector<std::optional<double>>* text_series = nullptr;
    if (options.caption && provider->supports_text()) {
        text_series = &report.metrics["clip_text"].values;
        text_series->assign(n, std::nullopt);
        try {
            text_embedding = provider->embed_text(*options.caption);
        } catch (const ProviderError& e) {
            report.issues.push_back({0, "clip_text", "provider", e.what()});
        }
    }

    for (std::size_t t = 0; t < n; ++t) {
        EmbeddingVector e_gt;
        EmbeddingVector e_over;
        EmbeddingVector e_gen;
        try {
            e_gen = provider->embed_image(gen.frame_view(t));
            e_gt = provider->embed_image(gt.frame_view(t));
            e_over = provider->embed_image(over_clip.frame_view(t));
        } catch (const ProviderError& e) {
            report.issues.push_back({t, "clip", "provider", e.what()});
            continue;
        }
        try {
            dir_series[t] = clip_dir(e_gt, e_over, e_gen);
        } catch (const DegenerateDirectionError& e) {
            report.issues.push_back({t, "clip_dir", e.code(), e.what()});
        }
        img_series[t] = cosine_sim(e_gen, e_gt);
        if (text_embedding) {
            (*text_series)[t] = cosine_sim(e_gen, *text_embedding);
        }
    }
    return report;
}

}  // namespace layercomp
