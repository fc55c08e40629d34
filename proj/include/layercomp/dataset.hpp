// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "layercomp/compose.hpp"
#include "layercomp/mask_pipeline.hpp"
#include "layercomp/trimask.hpp"
#include "layercomp/video.hpp"

namespace layercomp {

namespace fs = std::filesystem;

enum class SampleKind { paired_real, paired_synthetic, unpaired };

const char* to_string(SampleKind kind);
SampleKind sample_kind_from_string(const std::string& text);

/// One training record. Asset references are directories relative to the dataset root.
struct DatasetSample {
    std::string id;
    SampleKind kind = SampleKind::unpaired;
    std::string gt;
    std::optional<std::string> over;
    std::optional<std::string> trimask;
    std::string caption;
    std::string provenance;

    bool paired() const noexcept { return kind != SampleKind::unpaired; }

    /// Kind/optional-field consistency, non-empty caption, filesystem-safe id.
    void validate() const;

    bool operator==(const DatasetSample&) const = default;
};

struct Resolution {
    std::size_t height = 384;
    std::size_t width = 672;
    bool operator==(const Resolution&) const = default;
};

struct Manifest {
    static constexpr int kVersion = 1;

    int version = kVersion;
    Resolution default_resolution;
    std::vector<DatasetSample> samples;

    /// Version, positive resolution, unique ids, per-sample rules.
    void validate() const;

    const DatasetSample* find(const std::string& id) const;

    bool operator==(const Manifest&) const = default;
};

// Newline-delimited JSON: a header line {"version":1,"default_resolution":[H,W]} followed by
// one record per sample with fields id, kind, gt, over, trimask, caption, provenance.
// Absent optional fields are omitted.
void write_manifest(const Manifest& manifest, std::ostream& out);
void write_manifest(const Manifest& manifest, const fs::path& path);
/// Errors name the offending line (1-based).
Manifest read_manifest(std::istream& in);
Manifest read_manifest(const fs::path& path);

/// Model inputs for one sample. Unpaired samples carry zero/unknown placeholders.
struct ConditioningBundle {
    VideoClip gt;
    VideoClip over;
    TriMask trimask;
    std::string caption;
    bool conditioning_present = false;
};

struct PairedLayers {
    VideoClip gt;
    VideoClip fg_star;
    AlphaMatte alpha;
    VideoClip bg;
    BinaryMaskVideo subject;
};

struct BuildOptions {
    MorphParams morph;
    /// Quality gate on recompose_check's mean absolute residual.
    double max_mean_residual = 0.02;
    SampleKind kind = SampleKind::paired_real;
    std::string provenance;
    /// Compute and validate everything, write nothing.
    bool dry_run = false;
};

struct BuiltSample {
    DatasetSample sample;
    ResidualStats residual;
    std::optional<float> threshold;  // Otsu threshold of the effect mask
    VideoClip over;
    BinaryMaskVideo effect_mask;
};

/// Builds I_over and M_effect from decomposed layers and writes gt/over/trimask under root/id.
/// Throws DataQualityError when the layers do not reconstruct gt within the gate.
BuiltSample build_paired_sample(const PairedLayers& layers, const std::string& caption, const fs::path& root,
                                const std::string& id, const BuildOptions& options = {});

/// Writes gt under root/id; no conditioning assets.
DatasetSample build_unpaired_sample(const VideoClip& gt, const std::string& caption, const fs::path& root,
                                    const std::string& id, const std::string& provenance = {}, bool dry_run = false);

/// A manifest together with the directory its asset paths are relative to.
class Dataset {
public:
    Dataset(Manifest manifest, fs::path root);

    static Dataset open(const fs::path& manifest_path);

    const Manifest& manifest() const noexcept { return m_manifest; }
    const fs::path& root() const noexcept { return m_root; }

    /// Loads and dimension-checks a sample's assets.
    ConditioningBundle assemble(const DatasetSample& sample) const;
    ConditioningBundle assemble(const std::string& id) const;

private:
    Manifest m_manifest;
    fs::path m_root;
};

struct DatasetStats {
    std::map<std::string, std::size_t> kind_counts;  // every kind listed, zeros included
    std::size_t total_frames = 0;
    std::map<std::string, std::size_t> resolution_histogram;  // "HxW" -> sample count
    std::size_t missing_assets = 0;                           // samples whose gt could not be probed
};

/// Counts from the manifest; frame totals and resolutions probed from gt assets under root
/// when given.
DatasetStats dataset_stats(const Manifest& manifest, const std::optional<fs::path>& root = std::nullopt);

}  // namespace layercomp
