// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "layercomp/embedding.hpp"
#include "layercomp/video.hpp"

namespace layercomp {

/// Source of image/text embeddings. Implementations throw ProviderError on failure.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    /// Recorded in metric reports.
    virtual std::string identity() const = 0;

    virtual EmbeddingVector embed_image(const RgbFrameView& frame) = 0;

    virtual bool supports_text() const { return false; }
    virtual EmbeddingVector embed_text(const std::string& text);
};

/// Deterministic stand-in: unit Gaussian vectors seeded by a hash of the 8-bit pixels (or text).
/// Identical frames embed identically; any pixel change gives an unrelated direction.
class MockEmbeddingProvider final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDefaultDimension = 64;

    explicit MockEmbeddingProvider(std::size_t dimension = kDefaultDimension) : m_dimension(dimension) {}

    std::string identity() const override;
    EmbeddingVector embed_image(const RgbFrameView& frame) override;
    bool supports_text() const override { return true; }
    EmbeddingVector embed_text(const std::string& text) override;

    /// Raw (unnormalized) vectors, shared with the standalone mock executable.
    static std::vector<float> image_vector(std::span<const std::uint8_t> rgb8, std::size_t height, std::size_t width,
                                           std::size_t dimension);
    static std::vector<float> text_vector(const std::string& text, std::size_t dimension);

private:
    std::size_t m_dimension;
};

/// Talks to an external provider process over its standard streams.
///
/// Requests, one per line: `IMG <frame-file-path>` or `TXT <base64 utf-8 text>`.
/// Responses: `OK <D> <base64 little-endian float32 x D>` or `ERR <message>`.
/// Frames are written as PNG files to a private temporary directory before being requested.
class ProcessEmbeddingProvider final : public EmbeddingProvider {
public:
    /// Runs `command` through /bin/sh. Throws ProviderError if it cannot be started.
    explicit ProcessEmbeddingProvider(std::string command);
    ~ProcessEmbeddingProvider() override;

    ProcessEmbeddingProvider(const ProcessEmbeddingProvider&) = delete;
    ProcessEmbeddingProvider& operator=(const ProcessEmbeddingProvider&) = delete;

    std::string identity() const override;
    EmbeddingVector embed_image(const RgbFrameView& frame) override;
    bool supports_text() const override { return true; }
    EmbeddingVector embed_text(const std::string& text) override;

    /// Sends one raw request line and parses the response.
    EmbeddingVector request(const std::string& line);

private:
    struct Process;
    std::string m_command;
    std::unique_ptr<Process> m_process;
    std::filesystem::path m_scratch;
    std::size_t m_counter = 0;
};

/// Parses one response line of the provider protocol.
EmbeddingVector parse_provider_response(const std::string& line);

/// Formats a response line (used by provider implementations).
std::string format_provider_response(std::span<const float> values);

/// "builtin:mock" selects MockEmbeddingProvider, anything else is a command line.
std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec);

}  // namespace layercomp
