// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "layercomp/trimask.hpp"
#include "layercomp/video.hpp"

namespace layercomp {

namespace fs = std::filesystem;

/// An 8-bit image as stored on disk: interleaved, row-major.
struct Image8 {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 0;  // 1 or 3
    std::vector<std::uint8_t> pixels;
};

void write_png(const fs::path& path, const Image8& image);

/// Decodes a PNG converted to the requested channel count (1 or 3).
Image8 read_png(const fs::path& path, std::size_t channels);

/// round(255 * clamp(v, 0, 1))
std::uint8_t quantize8(float v);
inline float dequantize8(std::uint8_t v) { return static_cast<float>(v) / 255.0f; }

/// "frame_000001.png" for index 0.
std::string frame_filename(std::size_t index);

/// Number of consecutive frame files starting at frame_000001.png.
std::size_t count_frames(const fs::path& dir);

inline constexpr const char* kFpsFile = "fps.txt";
inline constexpr const char* kFrameStateFile = "frame_state.txt";

// Directory-of-frames readers and writers. Writers create the directory and
// remove stale frame files beyond the written count.

void write_clip(const fs::path& dir, const VideoClip& clip);
VideoClip read_clip(const fs::path& dir);

/// Alpha and gray volumes as 8-bit gray frames.
void write_alpha(const fs::path& dir, const AlphaMatte& alpha);
AlphaMatte read_alpha(const fs::path& dir);

/// Binary masks as 0/255 gray frames; on read any value > 127 is 1.
void write_binary_mask(const fs::path& dir, const BinaryMaskVideo& mask);
BinaryMaskVideo read_binary_mask(const fs::path& dir);

/// Tri-masks as raw {0,128,255} gray frames plus a one-state-per-line sidecar.
void write_trimask(const fs::path& dir, const TriMask& mask);
TriMask read_trimask(const fs::path& dir);

/// Width/height of frame_000001.png without decoding pixels.
std::pair<std::size_t, std::size_t> probe_frame_size(const fs::path& dir);

}  // namespace layercomp
