// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "layercomp/embedding.hpp"
#include "layercomp/provider.hpp"
#include "layercomp/video.hpp"

namespace layercomp {

/// Reported for identical frames instead of +infinity.
inline constexpr double kPsnrCapDb = 100.0;

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Single-scale SSIM on BT.601 luma, Gaussian window, averaged over valid window positions
/// (no padding). Throws ShapeError on mismatched frames or frames smaller than the window.
double ssim(const RgbFrameView& a, const RgbFrameView& b, const SsimParams& params = {});

/// 10 log10(1 / MSE) over all RGB samples, capped at kPsnrCapDb.
double psnr(const RgbFrameView& a, const RgbFrameView& b);

/// Per-frame values of one metric; missing frames hold nullopt.
struct MetricSeries {
    std::vector<std::optional<double>> values;

    std::size_t available() const;
    std::size_t missing() const { return values.size() - available(); }
    /// Mean over available frames; nullopt if none.
    std::optional<double> mean() const;
};

struct FrameIssue {
    std::size_t frame = 0;
    std::string metric;
    std::string error;  // short code, e.g. "no_generated_change", "provider"
    std::string detail;
};

struct MetricReport {
    std::string provider;                       // provider identity, empty when none
    std::map<std::string, std::string> clip_ids;  // "gt", "over", "gen" labels
    std::size_t frames = 0;                     // evaluated (after trimming)
    std::size_t input_frames = 0;               // longest input before trimming
    std::map<std::string, MetricSeries> metrics;  // ssim, psnr, clip_dir, clip_img, clip_text
    std::vector<FrameIssue> issues;

    nlohmann::ordered_json to_json() const;
};

/// Names of externally computed metrics that have reserved (null) slots in reports.
inline const std::vector<std::string> kExternalMetricSlots = {"lpips", "fvd", "vmaf", "vbench"};

struct EvaluateOptions {
    std::optional<std::string> caption;
    std::map<std::string, std::string> clip_ids;
};

/// Per-frame SSIM/PSNR of gen against gt, plus CLIP_dir, CLIP_img and (with a caption and a
/// text-capable provider) CLIP_text when a provider is given. Clips are trimmed to the
/// shortest. Provider or direction failures mark individual frames missing.
MetricReport evaluate_pair(const VideoClip& gt, const VideoClip& over_clip, const VideoClip& gen,
                           EmbeddingProvider* provider, const EvaluateOptions& options = {});

}  // namespace layercomp
