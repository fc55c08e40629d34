// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "layercomp/dataset.hpp"
#include "layercomp/frame_io.hpp"
#include "pipeline.hpp"
#include "temp_dir.hpp"

using namespace testutil;

namespace {

const std::string kCli = LAYERCOMP_CLI;
const std::string kMock = LAYERCOMP_MOCK_EMBEDDER;

nlohmann::json stdout_json(const fs::path& stem) { return nlohmann::json::parse(slurp(stem.string() + ".out")); }

}  // namespace

TEST(Cli, PipelineIsReproducible) {
    TempDir a, b;
    const auto start = std::chrono::steady_clock::now();
    const auto ra = run_pipeline(kCli, kMock, a.path(), 5);
    const auto rb = run_pipeline(kCli, kMock, b.path(), 5);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ASSERT_TRUE(ra.ok) << ra.failed_step << ": " << slurp(a / ("logs/" + ra.failed_step + ".err"));
    ASSERT_TRUE(rb.ok) << rb.failed_step;
    EXPECT_LT(secs, 60.0);

    const auto sa = snapshot(a / "out");
    const auto sb = snapshot(b / "out");
    EXPECT_EQ(sa.size(), sb.size());
    for (const auto& [path, bytes] : sa) {
        ASSERT_TRUE(sb.contains(path)) << path;
        EXPECT_TRUE(sb.at(path) == bytes) << path << " differs between runs";
    }

    const auto manifest = layercomp::read_manifest(a / "out/dataset/manifest.jsonl");
    EXPECT_EQ(manifest.samples.size(), 3u);
    EXPECT_EQ(manifest.find("scene_a")->kind, layercomp::SampleKind::paired_synthetic);
    EXPECT_EQ(manifest.find("web_a")->kind, layercomp::SampleKind::unpaired);

    const auto report = nlohmann::json::parse(slurp(a / "out/report.json"));
    EXPECT_NEAR(report["mean"]["ssim"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(report["mean"]["clip_dir"].get<double>(), 100.0, 1e-4);
    EXPECT_EQ(report["provider"], "process:" + kMock);

    const auto derived = nlohmann::json::parse(slurp(a / "out/derive.stdout.json"));
    EXPECT_GE(derived["iou"].get<double>(), 0.9);
    EXPECT_EQ(layercomp::read_trimask(a / "out/derived/trimask").frames(), 24u);
}

TEST(Cli, DifferentSeedsDiffer) {
    TempDir a, b;
    ASSERT_TRUE(run_pipeline(kCli, kMock, a.path(), 1).ok);
    ASSERT_TRUE(run_pipeline(kCli, kMock, b.path(), 2).ok);
    EXPECT_NE(slurp(a / "out/dataset/scene_a/gt/frame_000001.png"), slurp(b / "out/dataset/scene_a/gt/frame_000001.png"));
}

TEST(Cli, CorruptedLayerExitsWithDataQualityCode) {
    TempDir d;
    const std::string bin = quote(kCli);
    // The bad sample carries the background of a different scene.
    std::ofstream(d / "gradient.json") << R"({"background":{"kind":"gradient"}})";
    ASSERT_EQ(run(bin + " --seed 1 oracle --out " + quote((d / "layers/good").string()), d / "o1"), 0);
    ASSERT_EQ(run(bin + " oracle --out " + quote((d / "layers/bad").string()), d / "o2"), 0);
    ASSERT_EQ(run(bin + " oracle --spec " + quote((d / "gradient.json").string()) + " --out " +
                      quote((d / "donor").string()),
                  d / "o3"),
              0);
    fs::remove_all(d / "layers/bad/bg");
    fs::copy(d / "donor/bg", d / "layers/bad/bg");
    EXPECT_EQ(run(bin + " build-dataset --layers " + quote((d / "layers").string()) + " --manifest " +
                      quote((d / "ds/manifest.jsonl").string()),
                  d / "build"),
              3);
    const auto summary = stdout_json(d / "build");
    ASSERT_EQ(summary["rejected"].size(), 1u);
    EXPECT_EQ(summary["rejected"][0]["id"], "bad");
    EXPECT_EQ(layercomp::read_manifest(d / "ds/manifest.jsonl").samples.size(), 1u);
}

TEST(Cli, ValidationErrorsExitTwoWithJsonRecord) {
    TempDir d;
    EXPECT_EQ(run(quote(kCli) + " compose --fg nope --alpha nope --bg nope --out x", d / "c"), 2);
    const auto err = nlohmann::json::parse(slurp(d / "c.err"));
    EXPECT_EQ(err["error"]["kind"], "io");
    EXPECT_EQ(run(quote(kCli) + " derive-mask --median 4 --gt a --over b --subject c --out d", d / "m"), 2);
    EXPECT_EQ(run(quote(kCli) + " plan-windows 0", d / "p"), 2);
    EXPECT_EQ(run(quote(kCli) + " no-such-command", d / "n"), 2);
}

TEST(Cli, ProviderFailureExitsFour) {
    TempDir d;
    const std::string bin = quote(kCli);
    ASSERT_EQ(run(bin + " oracle --frames 3 --out " + quote((d / "s").string()), d / "o"), 0);
    const std::string clip = quote((d / "s/gt").string());
    EXPECT_EQ(run(bin + " evaluate --gt " + clip + " --over " + quote((d / "s/over").string()) + " --gen " + clip +
                      " --provider " + quote(kMock + " --fail-every 1") + " --report " +
                      quote((d / "r.json").string()),
                  d / "e"),
              4);
    EXPECT_TRUE(fs::exists(d / "r.json"));
}

TEST(Cli, DryRunWritesNothing) {
    TempDir d;
    EXPECT_EQ(run(quote(kCli) + " --dry-run oracle --out " + quote((d / "s").string()), d / "o"), 0);
    EXPECT_FALSE(fs::exists(d / "s"));
}

TEST(Cli, ComposeMatchesOracleComposite) {
    TempDir d;
    const std::string bin = quote(kCli);
    ASSERT_EQ(run(bin + " --seed 4 oracle --frames 4 --out " + quote((d / "s").string()), d / "o"), 0);
    ASSERT_EQ(run(bin + " compose --fg " + quote((d / "s/fg").string()) + " --subject " +
                      quote((d / "s/subject").string()) + " --bg " + quote((d / "s/bg").string()) + " --out " +
                      quote((d / "over").string()),
                  d / "c"),
              0);
    EXPECT_EQ(snapshot(d / "over"), snapshot(d / "s/over"));
}

TEST(Cli, PlanWindowsPrintsPlan) {
    TempDir d;
    ASSERT_EQ(run(quote(kCli) + " plan-windows 149 85 64", d / "p"), 0);
    const auto j = stdout_json(d / "p");
    EXPECT_EQ(j["windows"], nlohmann::json::parse("[[0,85],[64,149]]"));
    ASSERT_EQ(run(quote(kCli) + " plan-windows 300 --window 100 --stride 50 --ramp cosine", d / "q"), 0);
    EXPECT_EQ(stdout_json(d / "q")["window"], 100);
}

TEST(Cli, JsonLogsAreJsonLines) {
    TempDir d;
    const std::string bin = quote(kCli);
    ASSERT_EQ(run(bin + " oracle --frames 2 --out " + quote((d / "s").string()), d / "o"), 0);
    ASSERT_EQ(run(bin + " --log-json --log-level info evaluate --gt " + quote((d / "s/gt").string()) + " --over " +
                      quote((d / "s/over").string()) + " --gen " + quote((d / "s/gt").string()) + " --report " +
                      quote((d / "r.json").string()),
                  d / "e"),
              0);
    std::istringstream err(slurp(d / "e.err"));
    std::string line;
    int lines = 0;
    while (std::getline(err, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_TRUE(j.contains("level"));
        EXPECT_TRUE(j.contains("msg"));
        ++lines;
    }
    EXPECT_GT(lines, 0);
}
