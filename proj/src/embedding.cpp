// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/embedding.hpp"

#include <algorithm>
#include <cmath>

namespace layercomp {
namespace {

void require_same_dimension(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": embedding dimensions differ (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
    }
}

}  // namespace

EmbeddingVector EmbeddingVector::normalized(std::vector<float> values) {
    if (values.empty()) {
        throw ValidationError("embedding must have dimension > 0");
    }
    double sq = 0.0;
    for (float v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("embedding contains a non-finite value");
        }
        sq += static_cast<double>(v) * v;
    }
    if (sq == 0.0) {
        throw ValidationError("cannot normalize a zero embedding");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (float& v : values) {
        v = static_cast<float>(v * inv);
    }
    EmbeddingVector e;
    e.m_values = std::move(values);
    return e;
}

const char* DegenerateDirectionError::code() const noexcept {
    return m_which == Direction::ground_truth ? "no_ground_truth_change" : "no_generated_change";
}

double clip_dir(std::span<const float> gt, std::span<const float> over, std::span<const float> gen,
                double epsilon) {
    require_same_dimension(gt.size(), over.size(), "clip_dir");
    require_same_dimension(gt.size(), gen.size(), "clip_dir");
    double dot = 0.0;
    double gt_sq = 0.0;
    double gen_sq = 0.0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
        const double a = static_cast<double>(gt[i]) - over[i];
        const double b = static_cast<double>(gen[i]) - over[i];
        dot += a * b;
        gt_sq += a * a;
        gen_sq += b * b;
    }
    const double gt_norm = std::sqrt(gt_sq);
    const double gen_norm = std::sqrt(gen_sq);
    if (gt_norm <= epsilon) {
        throw DegenerateDirectionError(Direction::ground_truth,
                                       "ground truth does not differ from the composite in embedding space");
    }
    if (gen_norm <= epsilon) {
        throw DegenerateDirectionError(Direction::generated,
                                       "generated frame does not differ from the composite in embedding space");
    }
    return std::clamp(100.0 * dot / (gt_norm * gen_norm), -100.0, 100.0);
}

double clip_dir(const EmbeddingVector& gt, const EmbeddingVector& over, const EmbeddingVector& gen,
                double epsilon) {
    return clip_dir(gt.values(), over.values(), gen.values(), epsilon);
}

double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b) {
    require_same_dimension(a.dimension(), b.dimension(), "cosine_sim");
    if (a.dimension() == 0) {
        throw ValidationError("cosine_sim: empty embedding");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        dot += static_cast<double>(a.values()[i]) * b.values()[i];
    }
    return std::clamp(100.0 * dot, -100.0, 100.0);
}

double cosine_sim(std::span<const float> a, std::span<const float> b) {
    require_same_dimension(a.size(), b.size(), "cosine_sim");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw ValidationError("cosine_sim: zero vector");
    }
    return std::clamp(100.0 * dot / std::sqrt(na * nb), -100.0, 100.0);
}

}  // namespace layercomp
