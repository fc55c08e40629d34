// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/dataset.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "layercomp/frame_io.hpp"
#include "layercomp/log.hpp"

namespace layercomp {

using nlohmann::ordered_json;

const char* to_string(SampleKind kind) {
    switch (kind) {
        case SampleKind::paired_real: return "paired_real";
        case SampleKind::paired_synthetic: return "paired_synthetic";
        case SampleKind::unpaired: return "unpaired";
    }
    return "unknown";
}

SampleKind sample_kind_from_string(const std::string& text) {
    if (text == "paired_real") {
        return SampleKind::paired_real;
    }
    if (text == "paired_synthetic") {
        return SampleKind::paired_synthetic;
    }
    if (text == "unpaired") {
        return SampleKind::unpaired;
    }
    throw ValidationError("unknown sample kind '" + text + "'");
}

void DatasetSample::validate() const {
    if (id.empty()) {
        throw ValidationError("sample id must not be empty");
    }
    if (id == "." || id == ".." || id.find('/') != std::string::npos || id.find('\\') != std::string::npos ||
        id.find('\0') != std::string::npos) {
        throw ValidationError("sample id '" + id + "' is not a valid directory name");
    }
    if (gt.empty()) {
        throw ValidationError("sample '" + id + "': gt reference must not be empty");
    }
    if (caption.empty()) {
        throw ValidationError("sample '" + id + "': caption must not be empty");
    }
    if (paired()) {
        if (!over || !trimask) {
            throw ValidationError("sample '" + id + "': paired samples need both over and trimask references");
        }
    } else if (over || trimask) {
        throw ValidationError("sample '" + id + "': unpaired samples must not carry over/trimask references");
    }
}

void Manifest::validate() const {
    if (version != kVersion) {
        throw ValidationError("manifest version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kVersion) + ")");
    }
    if (default_resolution.height == 0 || default_resolution.width == 0) {
        throw ValidationError("manifest default resolution must be positive");
    }
    std::set<std::string> ids;
    for (const auto& s : samples) {
        s.validate();
        if (!ids.insert(s.id).second) {
            throw ValidationError("duplicate sample id '" + s.id + "'");
        }
    }
}

const DatasetSample* Manifest::find(const std::string& id) const {
    for (const auto& s : samples) {
        if (s.id == id) {
            return &s;
        }
    }
    return nullptr;
}

namespace {

ordered_json record_of(const DatasetSample& s) {
    ordered_json j;
    j["id"] = s.id;
    j["kind"] = to_string(s.kind);
    j["gt"] = s.gt;
    if (s.over) {
        j["over"] = *s.over;
    }
    if (s.trimask) {
        j["trimask"] = *s.trimask;
    }
    j["caption"] = s.caption;
    j["provenance"] = s.provenance;
    return j;
}

std::string required_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(std::string("missing field '") + key + "'");
    }
    if (!it->is_string()) {
        throw ValidationError(std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw ValidationError(std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

DatasetSample sample_of(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("record must be a JSON object");
    }
    static const std::set<std::string> known = {"id", "kind", "gt", "over", "trimask", "caption", "provenance"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ValidationError("unknown field '" + key + "'");
        }
    }
    DatasetSample s;
    s.id = required_string(j, "id");
    s.kind = sample_kind_from_string(required_string(j, "kind"));
    s.gt = required_string(j, "gt");
    s.over = optional_string(j, "over");
    s.trimask = optional_string(j, "trimask");
    s.caption = required_string(j, "caption");
    s.provenance = optional_string(j, "provenance").value_or("");
    s.validate();
    return s;
}

}  // namespace

void write_manifest(const Manifest& manifest, std::ostream& out) {
    manifest.validate();
    ordered_json header;
    header["version"] = manifest.version;
    header["default_resolution"] = {manifest.default_resolution.height, manifest.default_resolution.width};
    out << header.dump() << '\n';
    for (const auto& s : manifest.samples) {
        out << record_of(s).dump() << '\n';
    }
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ostringstream buffer;
    write_manifest(manifest, buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write manifest " + path.string());
    }
    out << buffer.str();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

Manifest read_manifest(std::istream& in) {
    Manifest manifest;
    bool have_header = false;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        const std::string where = "manifest line " + std::to_string(line_no) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + "malformed JSON (" + e.what() + ")");
        }
        try {
            if (!have_header) {
                if (!j.is_object() || !j.contains("version")) {
                    throw ValidationError("expected header record with a 'version' field");
                }
                manifest.version = j.at("version").get<int>();
                if (manifest.version != Manifest::kVersion) {
                    throw ValidationError("version mismatch: file has " + std::to_string(manifest.version) +
                                          ", reader supports " + std::to_string(Manifest::kVersion));
                }
                const auto& res = j.at("default_resolution");
                manifest.default_resolution = {res.at(0).get<std::size_t>(), res.at(1).get<std::size_t>()};
                if (manifest.default_resolution.height == 0 || manifest.default_resolution.width == 0) {
                    throw ValidationError("default resolution must be positive");
                }
                have_header = true;
                continue;
            }
            DatasetSample s = sample_of(j);
            if (!ids.insert(s.id).second) {
                throw ValidationError("duplicate sample id '" + s.id + "'");
            }
            manifest.samples.push_back(std::move(s));
        } catch (const ValidationError& e) {
            throw ValidationError(where + e.what());
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(where + e.what());
        }
    }
    if (!have_header) {
        throw ValidationError("manifest is empty: missing header record");
    }
    return manifest;
}

Manifest read_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open manifest " + path.string());
    }
    return read_manifest(in);
}

BuiltSample build_paired_sample(const PairedLayers& layers, const std::string& caption, const fs::path& root,
                                const std::string& id, const BuildOptions& options) {
    if (options.kind == SampleKind::unpaired) {
        throw ValidationError("build_paired_sample: kind must be a paired kind");
    }
    options.morph.validate();
    require_same_shape(layers.gt.shape(), layers.subject.shape(), "build_paired_sample: subject mask");

    BuiltSample built;
    built.residual = recompose_check(layers.fg_star, layers.alpha, layers.bg, layers.gt);
    if (built.residual.mean_abs > options.max_mean_residual) {
        throw DataQualityError("sample '" + id + "': layers reconstruct gt with mean residual " +
                                   std::to_string(built.residual.mean_abs) + " > " +
                                   std::to_string(options.max_mean_residual),
                               built.residual.mean_abs);
    }

    built.over = compose_subject_over(layers.fg_star, layers.subject, layers.bg);
    EffectMask effect = derive_effect_mask(layers.gt, built.over, layers.subject, options.morph);
    built.threshold = effect.threshold;
    built.effect_mask = std::move(effect.mask);

    auto m = built.effect_mask.values();
    auto s = layers.subject.values();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] && s[i]) {
            throw DataQualityError("sample '" + id + "': effect mask overlaps the subject", 1.0);
        }
    }

    built.sample.id = id;
    built.sample.kind = options.kind;
    built.sample.gt = id + "/gt";
    built.sample.over = id + "/over";
    built.sample.trimask = id + "/trimask";
    built.sample.caption = caption;
    built.sample.provenance = options.provenance;
    built.sample.validate();

    if (!options.dry_run) {
        write_clip(root / built.sample.gt, layers.gt);
        write_clip(root / *built.sample.over, built.over);
        write_trimask(root / *built.sample.trimask, from_binary(built.effect_mask));
    }
    return built;
}

DatasetSample build_unpaired_sample(const VideoClip& gt, const std::string& caption, const fs::path& root,
                                    const std::string& id, const std::string& provenance, bool dry_run) {
    DatasetSample s;
    s.id = id;
    s.kind = SampleKind::unpaired;
    s.gt = id + "/gt";
    s.caption = caption;
    s.provenance = provenance;
    s.validate();
    if (!dry_run) {
        write_clip(root / s.gt, gt);
    }
    return s;
}

Dataset::Dataset(Manifest manifest, fs::path root) : m_manifest(std::move(manifest)), m_root(std::move(root)) {
    m_manifest.validate();
}

Dataset Dataset::open(const fs::path& manifest_path) {
    return Dataset(read_manifest(manifest_path), manifest_path.parent_path());
}

ConditioningBundle Dataset::assemble(const DatasetSample& sample) const {
    sample.validate();
    ConditioningBundle bundle;
    bundle.gt = read_clip(m_root / sample.gt);
    bundle.caption = sample.caption;
    if (!sample.paired()) {
        bundle.over = VideoClip(bundle.gt.shape(), 0.0f, bundle.gt.fps());
        bundle.trimask = TriMask::uniform_unknown(bundle.gt.shape());
        bundle.conditioning_present = false;
        return bundle;
    }
    bundle.over = read_clip(m_root / *sample.over);
    bundle.trimask = read_trimask(m_root / *sample.trimask);
    require_same_shape(bundle.gt.shape(), bundle.over.shape(), "sample '" + sample.id + "': over clip");
    require_same_shape(bundle.gt.shape(), bundle.trimask.shape(), "sample '" + sample.id + "': tri-mask");
    if (auto violation = validate(bundle.trimask)) {
        throw ValidationError("sample '" + sample.id + "': " + violation->message);
    }
    bundle.conditioning_present = true;
    return bundle;
}

ConditioningBundle Dataset::assemble(const std::string& id) const {
    const DatasetSample* s = m_manifest.find(id);
    if (s == nullptr) {
        throw ValidationError("no sample with id '" + id + "'");
    }
    return assemble(*s);
}

DatasetStats dataset_stats(const Manifest& manifest, const std::optional<fs::path>& root) {
    DatasetStats stats;
    for (auto kind : {SampleKind::paired_real, SampleKind::paired_synthetic, SampleKind::unpaired}) {
        stats.kind_counts[to_string(kind)] = 0;
    }
    for (const auto& s : manifest.samples) {
        ++stats.kind_counts[to_string(s.kind)];
        if (!root) {
            continue;
        }
        const fs::path dir = *root / s.gt;
        const std::size_t frames = count_frames(dir);
        if (frames == 0) {
            ++stats.missing_assets;
            continue;
        }
        stats.total_frames += frames;
        const auto [h, w] = probe_frame_size(dir);
        ++stats.resolution_histogram[std::to_string(h) + "x" + std::to_string(w)];
    }
    return stats;
}

}  // namespace layercomp
