// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace layercomp {

/// Failure category. Each maps to a CLI exit code.
enum class ErrorKind {
    shape,           // dimension mismatch between inputs
    validation,      // malformed values or parameters
    io,              // missing or unreadable files
    degenerate,      // degenerate input (constant histogram, zero-length direction)
    data_quality,    // input rejected by a quality gate
    provider,        // embedding provider failure
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), m_kind(kind) {}

    ErrorKind kind() const noexcept { return m_kind; }

private:
    ErrorKind m_kind;
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& message) : Error(ErrorKind::shape, message) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error(ErrorKind::validation, message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

/// Otsu precondition failure: fewer than two distinct quantized levels.
class DegenerateHistogramError : public Error {
public:
    explicit DegenerateHistogramError(const std::string& message) : Error(ErrorKind::degenerate, message) {}
};

class DataQualityError : public Error {
public:
    DataQualityError(const std::string& message, double value)
        : Error(ErrorKind::data_quality, message), m_value(value) {}

    /// The measured quantity that failed the gate.
    double value() const noexcept { return m_value; }

private:
    double m_value;
};

class ProviderError : public Error {
public:
    explicit ProviderError(const std::string& message) : Error(ErrorKind::provider, message) {}
};

}  // namespace layercomp
