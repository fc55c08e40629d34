// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "layercomp/compose.hpp"
#include "layercomp/dataset.hpp"
#include "layercomp/frame_io.hpp"
#include "layercomp/log.hpp"
#include "layercomp/mask_pipeline.hpp"
#include "layercomp/metrics.hpp"
#include "layercomp/provider.hpp"
#include "layercomp/synth_oracle.hpp"
#include "layercomp/trimask.hpp"
#include "layercomp/windowing.hpp"

using namespace layercomp;
using nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kDataQuality = 3, kProvider = 4 };

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::data_quality: return kDataQuality;
        case ErrorKind::provider: return kProvider;
        default: return kValidation;
    }
}

struct GlobalOptions {
    bool dry_run = false;
    bool log_json = false;
    std::string log_level = "warn";
    std::uint64_t seed = 0;
};

struct MorphFlags {
    MorphParams params;

    void attach(CLI::App* cmd) {
        cmd->add_option("--erode", params.erode_iters, "Erosion iterations")->capture_default_str();
        cmd->add_option("--dilate", params.dilate_iters, "Dilation iterations")->capture_default_str();
        cmd->add_option("--median", params.median_kernel, "Median kernel size (odd)")->capture_default_str();
    }
};

void require_dir(const fs::path& p, const char* what) {
    if (!fs::is_directory(p)) {
        throw IoError(std::string(what) + " directory not found: " + p.string());
    }
}

std::string read_text_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void write_text_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + p.string());
    }
    out << text;
}

void emit(const ordered_json& summary) { std::cout << summary.dump(2) << "\n"; }

// ---------------------------------------------------------------------------------------------
// compose

struct ComposeArgs {
    std::string fg, alpha, subject, bg, out;
};

int run_compose(const ComposeArgs& a, const GlobalOptions& g) {
    const VideoClip fg = read_clip(a.fg);
    const VideoClip bg = read_clip(a.bg);
    VideoClip result;
    std::string mode;
    if (!a.alpha.empty()) {
        result = over(fg, read_alpha(a.alpha), bg);
        mode = "alpha";
    } else {
        result = compose_subject_over(fg, read_binary_mask(a.subject), bg);
        mode = "subject";
    }
    if (!g.dry_run) {
        write_clip(a.out, result);
    }
    emit({{"command", "compose"}, {"mode", mode}, {"shape", result.shape().to_string()}, {"dry_run", g.dry_run}});
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// derive-mask

struct DeriveArgs {
    std::string gt, over, subject, out, truth;
    MorphFlags morph;
    double gray_prob = 0.0;
};

int run_derive_mask(const DeriveArgs& a, const GlobalOptions& g) {
    a.morph.params.validate();
    const VideoClip gt = read_clip(a.gt);
    const VideoClip over_clip = read_clip(a.over);
    const BinaryMaskVideo subject = read_binary_mask(a.subject);
    const EffectMask effect = derive_effect_mask(gt, over_clip, subject, a.morph.params);

    TriMask trimask = from_binary(effect.mask);
    if (a.gray_prob > 0.0) {
        trimask = gray_augment(trimask, a.gray_prob, g.seed);
    }

    ordered_json summary;
    summary["command"] = "derive-mask";
    summary["threshold_mode"] = "global";
    summary["threshold"] = effect.threshold ? ordered_json(*effect.threshold) : ordered_json(nullptr);
    summary["degenerate"] = !effect.threshold.has_value();
    summary["morph"] = {{"erode", a.morph.params.erode_iters},
                        {"dilate", a.morph.params.dilate_iters},
                        {"median", a.morph.params.median_kernel}};
    summary["gray_prob"] = a.gray_prob;
    summary["seed"] = g.seed;
    summary["annotated_frames"] = trimask.annotated_count();
    if (!a.truth.empty()) {
        summary["iou"] = iou(effect.mask, read_binary_mask(a.truth));
    }
    if (!g.dry_run) {
        const fs::path out(a.out);
        write_binary_mask(out / "mask", effect.mask);
        write_trimask(out / "trimask", trimask);
        ordered_json meta = summary;
        meta.erase("command");
        meta.erase("iou");
        write_text_file(out / "meta.json", meta.dump(2) + "\n");
    }
    summary["dry_run"] = g.dry_run;
    emit(summary);
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// build-dataset

struct BuildArgs {
    std::string layers, manifest;
    MorphFlags morph;
    double max_residual = 0.02;
    std::string resolution = "384x672";
};

Resolution parse_resolution(const std::string& text) {
    Resolution r;
    char x = 0;
    std::istringstream in(text);
    if (!(in >> r.height >> x >> r.width) || x != 'x' || r.height == 0 || r.width == 0) {
        throw ValidationError("resolution must look like HxW, got '" + text + "'");
    }
    return r;
}

int run_build_dataset(const BuildArgs& a, const GlobalOptions& g) {
    a.morph.params.validate();
    require_dir(a.layers, "layer root");
    const fs::path manifest_path(a.manifest);
    const fs::path root = manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path(".");

    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(a.layers)) {
        if (entry.is_directory()) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());

    Manifest manifest;
    manifest.default_resolution = parse_resolution(a.resolution);
    ordered_json rejected = ordered_json::array();
    ordered_json built = ordered_json::array();

    for (const auto& dir : dirs) {
        const std::string id = dir.filename().string();
        if (!fs::exists(dir / "caption.txt")) {
            throw ValidationError("sample '" + id + "': missing caption.txt");
        }
        const std::string caption = trim(read_text_file(dir / "caption.txt"));
        const std::string provenance =
            fs::exists(dir / "provenance.txt") ? trim(read_text_file(dir / "provenance.txt")) : "";
        const VideoClip gt = read_clip(dir / "gt");

        if (!fs::exists(dir / "fg")) {
            manifest.samples.push_back(build_unpaired_sample(gt, caption, root, id, provenance, g.dry_run));
            built.push_back({{"id", id}, {"kind", "unpaired"}});
            continue;
        }

        PairedLayers layers{gt, read_clip(dir / "fg"), read_alpha(dir / "alpha"), read_clip(dir / "bg"),
                            read_binary_mask(dir / "subject")};
        BuildOptions options;
        options.morph = a.morph.params;
        options.max_mean_residual = a.max_residual;
        options.provenance = provenance;
        options.dry_run = g.dry_run;
        options.kind = fs::exists(dir / "kind.txt") ? sample_kind_from_string(trim(read_text_file(dir / "kind.txt")))
                                                    : SampleKind::paired_real;
        try {
            BuiltSample s = build_paired_sample(layers, caption, root, id, options);
            built.push_back({{"id", id},
                             {"kind", to_string(s.sample.kind)},
                             {"residual_mean", s.residual.mean_abs},
                             {"residual_max", s.residual.max_abs},
                             {"threshold", s.threshold ? ordered_json(*s.threshold) : ordered_json(nullptr)}});
            manifest.samples.push_back(std::move(s.sample));
        } catch (const DataQualityError& e) {
            log().error("{}", e.what());
            rejected.push_back({{"id", id}, {"residual_mean", e.value()}, {"message", e.what()}});
        }
    }

    if (!g.dry_run) {
        write_manifest(manifest, manifest_path);
    }
    const DatasetStats stats = dataset_stats(manifest);
    emit({{"command", "build-dataset"},
          {"samples", built},
          {"rejected", rejected},
          {"counts", stats.kind_counts},
          {"dry_run", g.dry_run}});
    return rejected.empty() ? kOk : kDataQuality;
}

// ---------------------------------------------------------------------------------------------
// oracle

struct OracleArgs {
    std::string spec, out;
    std::size_t height = 64, width = 64, frames = 24;
    double noise_sigma = 0.0;
    double salt_pepper = 0.0;
    std::string caption = "a box slides across a checkerboard floor, casting a shadow";
};

int run_oracle(const OracleArgs& a, const GlobalOptions& g) {
    OracleScene scene;
    if (!a.spec.empty()) {
        try {
            scene = nlohmann::json::parse(read_text_file(a.spec)).get<OracleScene>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("scene spec " + a.spec + ": " + e.what());
        }
    } else {
        scene = OracleScene::random(g.seed, a.height, a.width, a.frames);
    }
    OracleBundle b = generate(scene);
    if (a.noise_sigma > 0.0 || a.salt_pepper > 0.0) {
        b = perturb(std::move(b), a.noise_sigma, a.salt_pepper, g.seed);
    }
    if (!g.dry_run) {
        const fs::path out(a.out);
        write_clip(out / "gt", b.gt);
        write_clip(out / "over", b.over);
        write_clip(out / "fg", b.fg_star);
        write_clip(out / "bg", b.bg);
        write_alpha(out / "alpha", b.alpha);
        write_binary_mask(out / "subject", b.subject_mask);
        write_binary_mask(out / "effect_truth", b.effect_mask_truth);
        write_text_file(out / "caption.txt", a.caption + "\n");
        write_text_file(out / "kind.txt", "paired_synthetic\n");
        write_text_file(out / "provenance.txt", "oracle seed " + std::to_string(scene.seed) + "\n");
        write_text_file(out / "scene.json", nlohmann::json(scene).dump(2) + "\n");
    }
    emit({{"command", "oracle"}, {"scene", nlohmann::json(scene)}, {"dry_run", g.dry_run}});
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
    std::string gt, over, gen, provider, report, caption;
};

int run_evaluate(const EvaluateArgs& a, const GlobalOptions& g) {
    const VideoClip gt = read_clip(a.gt);
    const VideoClip over_clip = read_clip(a.over);
    const VideoClip gen = read_clip(a.gen);
    require_same_frame_size(gt.shape(), over_clip.shape(), "evaluate: composite clip");
    require_same_frame_size(gt.shape(), gen.shape(), "evaluate: generated clip");
    if (g.dry_run) {
        emit({{"command", "evaluate"}, {"dry_run", true}});
        return kOk;
    }

    std::unique_ptr<EmbeddingProvider> provider;
    if (!a.provider.empty()) {
        provider = make_provider(a.provider);
    } else {
        log().warn("no --provider given; CLIP metrics are skipped");
    }

    EvaluateOptions options;
    options.clip_ids = {{"gt", fs::path(a.gt).filename().string()},
                        {"over", fs::path(a.over).filename().string()},
                        {"gen", fs::path(a.gen).filename().string()}};
    if (!a.caption.empty()) {
        options.caption = a.caption;
    }
    const MetricReport report = evaluate_pair(gt, over_clip, gen, provider.get(), options);
    write_text_file(a.report, report.to_json().dump(2) + "\n");

    ordered_json summary = {{"command", "evaluate"}, {"report", a.report}};
    summary["mean"] = report.to_json()["mean"];
    emit(summary);

    if (provider) {
        std::size_t provider_failures = 0;
        for (const auto& issue : report.issues) {
            provider_failures += issue.error == "provider" ? 1 : 0;
        }
        if (report.frames > 0 && provider_failures >= report.frames) {
            log().error("embedding provider failed on every frame");
            return kProvider;
        }
    }
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// plan-windows

struct PlanArgs {
    std::size_t frames = 0;
    std::optional<std::size_t> window_pos, stride_pos;
    std::size_t window = kDefaultWindow;
    std::size_t stride = kDefaultStride;
    std::string ramp = "linear";
};

int run_plan_windows(const PlanArgs& a, const GlobalOptions&) {
    const std::size_t window = a.window_pos.value_or(a.window);
    const std::size_t stride = a.stride_pos.value_or(a.stride);
    const RampShape ramp = a.ramp == "cosine" ? RampShape::cosine : RampShape::linear;
    std::cout << plan_windows(a.frames, window, stride, ramp).to_json().dump() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------------------------
// stats

int run_stats(const std::string& manifest_path, const GlobalOptions&) {
    const Manifest manifest = read_manifest(fs::path(manifest_path));
    const fs::path root = fs::path(manifest_path).parent_path();
    const DatasetStats stats = dataset_stats(manifest, root);
    emit({{"command", "stats"},
          {"counts", stats.kind_counts},
          {"total_frames", stats.total_frames},
          {"resolutions", stats.resolution_histogram},
          {"missing_assets", stats.missing_assets}});
    return kOk;
}

spdlog::level::level_enum parse_level(const std::string& text) {
    const auto level = spdlog::level::from_str(text);
    if (level == spdlog::level::off && text != "off") {
        throw ValidationError("unknown log level '" + text + "'");
    }
    return level;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Layered video compositing, effect masks, dataset building and evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_flag("--dry-run", global.dry_run, "Validate inputs and compute, but write nothing");
    app.add_flag("--log-json", global.log_json, "Emit log records as JSON lines on stderr");
    app.add_option("--log-level", global.log_level, "trace|debug|info|warn|error|off")->capture_default_str();
    app.add_option("--seed", global.seed, "Seed for every random choice")->capture_default_str();

    ComposeArgs compose_args;
    auto* compose_cmd = app.add_subcommand("compose", "Composite a foreground over a background");
    compose_cmd->add_option("--fg", compose_args.fg, "Foreground frames")->required();
    auto* alpha_opt = compose_cmd->add_option("--alpha", compose_args.alpha, "Alpha matte frames");
    auto* subject_opt = compose_cmd->add_option("--subject", compose_args.subject, "Binary subject mask frames");
    alpha_opt->excludes(subject_opt);
    compose_cmd->add_option("--bg", compose_args.bg, "Background frames")->required();
    compose_cmd->add_option("--out", compose_args.out, "Output frame directory")->required();

    DeriveArgs derive_args;
    auto* derive_cmd = app.add_subcommand("derive-mask", "Derive the effect mask and tri-mask from a clip pair");
    derive_cmd->add_option("--gt", derive_args.gt, "Clip with effects")->required();
    derive_cmd->add_option("--over", derive_args.over, "Composite without effects")->required();
    derive_cmd->add_option("--subject", derive_args.subject, "Binary subject mask")->required();
    derive_cmd->add_option("--out", derive_args.out, "Output directory")->required();
    derive_cmd->add_option("--truth", derive_args.truth, "Reference mask; reports IoU");
    derive_cmd->add_option("--gray-prob", derive_args.gray_prob, "Probability of replacing a frame with unknown")
        ->check(CLI::Range(0.0, 1.0));
    derive_args.morph.attach(derive_cmd);

    BuildArgs build_args;
    auto* build_cmd = app.add_subcommand("build-dataset", "Build samples and a manifest from layer directories");
    build_cmd->add_option("--layers", build_args.layers, "Root holding one directory per sample")->required();
    build_cmd->add_option("--manifest", build_args.manifest, "Manifest path; assets go next to it")->required();
    build_cmd->add_option("--max-residual", build_args.max_residual, "Recompose mean residual gate")
        ->capture_default_str();
    build_cmd->add_option("--resolution", build_args.resolution, "Default resolution HxW")->capture_default_str();
    build_args.morph.attach(build_cmd);

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "Generate a synthetic scene with exact layers");
    oracle_cmd->add_option("--spec", oracle_args.spec, "Scene JSON (random scene from --seed if omitted)");
    oracle_cmd->add_option("--out", oracle_args.out, "Output layer directory")->required();
    oracle_cmd->add_option("--height", oracle_args.height)->capture_default_str();
    oracle_cmd->add_option("--width", oracle_args.width)->capture_default_str();
    oracle_cmd->add_option("--frames", oracle_args.frames)->capture_default_str();
    oracle_cmd->add_option("--noise-sigma", oracle_args.noise_sigma, "Gaussian noise added to gt");
    oracle_cmd->add_option("--salt-pepper", oracle_args.salt_pepper, "Fraction of gt pixels set to 0/1");
    oracle_cmd->add_option("--caption", oracle_args.caption)->capture_default_str();

    EvaluateArgs eval_args;
    auto* eval_cmd = app.add_subcommand("evaluate", "Frame-level SSIM/PSNR and CLIP metrics");
    eval_cmd->add_option("--gt", eval_args.gt, "Ground-truth frames")->required();
    eval_cmd->add_option("--over", eval_args.over, "Composite-without-effects frames")->required();
    eval_cmd->add_option("--gen", eval_args.gen, "Generated frames")->required();
    eval_cmd->add_option("--provider", eval_args.provider, "Embedding provider command, or builtin:mock");
    eval_cmd->add_option("--caption", eval_args.caption, "Caption for CLIP_text");
    eval_cmd->add_option("--report", eval_args.report, "Report JSON path")->required();

    PlanArgs plan_args;
    auto* plan_cmd = app.add_subcommand("plan-windows", "Print the temporal window plan as JSON");
    plan_cmd->add_option("frames", plan_args.frames, "Total frames")->required();
    plan_cmd->add_option("window_size", plan_args.window_pos, "Window length");
    plan_cmd->add_option("stride_size", plan_args.stride_pos, "Window stride");
    plan_cmd->add_option("--window", plan_args.window)->capture_default_str();
    plan_cmd->add_option("--stride", plan_args.stride)->capture_default_str();
    plan_cmd->add_option("--ramp", plan_args.ramp)->check(CLI::IsMember({"linear", "cosine"}))->capture_default_str();

    std::string stats_manifest;
    auto* stats_cmd = app.add_subcommand("stats", "Summarize a manifest");
    stats_cmd->add_option("--manifest", stats_manifest)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }

    try {
        configure_logging(parse_level(global.log_level), global.log_json);
        if (*compose_cmd) {
            return run_compose(compose_args, global);
        }
        if (*derive_cmd) {
            return run_derive_mask(derive_args, global);
        }
        if (*build_cmd) {
            return run_build_dataset(build_args, global);
        }
        if (*oracle_cmd) {
            return run_oracle(oracle_args, global);
        }
        if (*eval_cmd) {
            return run_evaluate(eval_args, global);
        }
        if (*plan_cmd) {
            return run_plan_windows(plan_args, global);
        }
        if (*stats_cmd) {
            return run_stats(stats_manifest, global);
        }
    } catch (const Error& e) {
        std::cerr << ordered_json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}}.dump() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << ordered_json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump() << "\n";
        return kInternal;
    }
    return kInternal;
}
