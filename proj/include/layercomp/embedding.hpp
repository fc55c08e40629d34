// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "layercomp/error.hpp"

namespace layercomp {

/// An L2-normalized embedding.
class EmbeddingVector {
public:
    EmbeddingVector() = default;

    /// Normalizes raw provider output. Throws ValidationError on empty, non-finite or zero vectors.
    static EmbeddingVector normalized(std::vector<float> values);

    std::span<const float> values() const noexcept { return m_values; }
    std::size_t dimension() const noexcept { return m_values.size(); }

    bool operator==(const EmbeddingVector&) const = default;

private:
    std::vector<float> m_values;
};

/// Which difference vector collapsed in clip_dir.
enum class Direction { ground_truth, generated };

class DegenerateDirectionError : public Error {
public:
    DegenerateDirectionError(Direction which, const std::string& message)
        : Error(ErrorKind::degenerate, message), m_which(which) {}

    Direction which() const noexcept { return m_which; }

    /// "no_ground_truth_change" or "no_generated_change".
    const char* code() const noexcept;

private:
    Direction m_which;
};

inline constexpr double kDirectionEpsilon = 1e-8;

/// 100 * cos angle between (gt - over) and (gen - over). Inputs are used as given, so the
/// scale of either difference does not matter. Throws DegenerateDirectionError when a
/// difference has norm <= epsilon, ShapeError on dimension mismatch.
double clip_dir(std::span<const float> gt, std::span<const float> over, std::span<const float> gen,
                double epsilon = kDirectionEpsilon);

double clip_dir(const EmbeddingVector& gt, const EmbeddingVector& over, const EmbeddingVector& gen,
                double epsilon = kDirectionEpsilon);

/// 100 * (a . b) for normalized embeddings.
double cosine_sim(const EmbeddingVector& a, const EmbeddingVector& b);

/// 100 * cosine for raw vectors; throws ValidationError on a zero vector.
double cosine_sim(std::span<const float> a, std::span<const float> b);

}  // namespace layercomp
