// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include "layercomp/frame_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <png.h>

namespace layercomp {
namespace {

struct PngImage {
    png_image image{};
    PngImage() {
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

png_uint_32 format_for(std::size_t channels) {
    if (channels == 1) {
        return PNG_FORMAT_GRAY;
    }
    if (channels == 3) {
        return PNG_FORMAT_RGB;
    }
    throw ValidationError("PNG channel count must be 1 or 3, got " + std::to_string(channels));
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

void remove_stale_frames(const fs::path& dir, std::size_t written) {
    for (std::size_t i = written;; ++i) {
        const fs::path p = dir / frame_filename(i);
        if (!fs::exists(p)) {
            break;
        }
        fs::remove(p);
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

// Writes each frame of a single-channel or RGB stack through a per-sample encoder.
template <typename Stack, typename Encode>
void write_stack(const fs::path& dir, const Stack& stack, Encode encode) {
    prepare_dir(dir);
    for (std::size_t t = 0; t < stack.frames(); ++t) {
        auto src = stack.frame(t);
        Image8 img{stack.height(), stack.width(), Stack::channels, std::vector<std::uint8_t>(src.size())};
        std::transform(src.begin(), src.end(), img.pixels.begin(), encode);
        write_png(dir / frame_filename(t), img);
    }
    remove_stale_frames(dir, stack.frames());
}

// Reads all frames as 8-bit, checking they share one size.
std::pair<Shape, std::vector<std::uint8_t>> read_stack(const fs::path& dir, std::size_t channels) {
    const std::size_t n = count_frames(dir);
    if (n == 0) {
        throw IoError("no frames found in " + dir.string());
    }
    Shape shape{n, 0, 0};
    std::vector<std::uint8_t> data;
    for (std::size_t t = 0; t < n; ++t) {
        Image8 img = read_png(dir / frame_filename(t), channels);
        if (t == 0) {
            shape.height = img.height;
            shape.width = img.width;
            data.reserve(shape.pixel_count() * channels);
        } else if (img.height != shape.height || img.width != shape.width) {
            throw ShapeError(dir.string() + ": frame " + std::to_string(t + 1) + " is " + std::to_string(img.height) +
                             "x" + std::to_string(img.width) + ", expected " + std::to_string(shape.height) + "x" +
                             std::to_string(shape.width));
        }
        data.insert(data.end(), img.pixels.begin(), img.pixels.end());
    }
    return {shape, std::move(data)};
}

}  // namespace

void write_png(const fs::path& path, const Image8& image) {
    if (image.pixels.size() != image.height * image.width * image.channels) {
        throw ShapeError("PNG buffer size does not match " + std::to_string(image.height) + "x" +
                         std::to_string(image.width) + "x" + std::to_string(image.channels));
    }
    PngImage png;
    png.image.width = static_cast<png_uint_32>(image.width);
    png.image.height = static_cast<png_uint_32>(image.height);
    png.image.format = format_for(image.channels);
    if (!png_image_write_to_file(&png.image, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
        throw IoError("cannot write PNG " + path.string() + ": " + png.image.message);
    }
}

Image8 read_png(const fs::path& path, std::size_t channels) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
        throw IoError("cannot read PNG " + path.string() + ": " + png.image.message);
    }
    png.image.format = format_for(channels);
    Image8 out{png.image.height, png.image.width, channels, {}};
    out.pixels.resize(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, out.pixels.data(), 0, nullptr)) {
        throw IoError("cannot decode PNG " + path.string() + ": " + png.image.message);
    }
    return out;
}

std::uint8_t quantize8(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

std::string frame_filename(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06zu.png", index + 1);
    return buf;
}

std::size_t count_frames(const fs::path& dir) {
    std::size_t n = 0;
    while (fs::exists(dir / frame_filename(n))) {
        ++n;
    }
    return n;
}

void write_clip(const fs::path& dir, const VideoClip& clip) {
    write_stack(dir, clip, quantize8);
    write_text(dir / kFpsFile, std::to_string(clip.fps().num) + "/" + std::to_string(clip.fps().den) + "\n");
}

VideoClip read_clip(const fs::path& dir) {
    auto [shape, bytes] = read_stack(dir, 3);
    std::vector<float> values(bytes.size());
    std::transform(bytes.begin(), bytes.end(), values.begin(), dequantize8);

    FrameRate fps;
    if (std::ifstream in(dir / kFpsFile); in) {
        char slash = 0;
        if (!(in >> fps.num >> slash >> fps.den) || slash != '/') {
            throw ValidationError("malformed " + (dir / kFpsFile).string() + ", expected NUM/DEN");
        }
    }
    VideoClip clip(shape, std::move(values));
    clip.set_fps(fps);
    return clip;
}

void write_alpha(const fs::path& dir, const AlphaMatte& alpha) { write_stack(dir, alpha, quantize8); }

AlphaMatte read_alpha(const fs::path& dir) {
    auto [shape, bytes] = read_stack(dir, 1);
    std::vector<float> values(bytes.size());
    std::transform(bytes.begin(), bytes.end(), values.begin(), dequantize8);
    return AlphaMatte(shape, std::move(values));
}

void write_binary_mask(const fs::path& dir, const BinaryMaskVideo& mask) {
    require_binary(mask, "write_binary_mask");
    write_stack(dir, mask, [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
}

BinaryMaskVideo read_binary_mask(const fs::path& dir) {
    auto [shape, bytes] = read_stack(dir, 1);
    for (auto& b : bytes) {
        b = b > 127 ? 1 : 0;
    }
    return BinaryMaskVideo(shape, std::move(bytes));
}

void write_trimask(const fs::path& dir, const TriMask& mask) {
    write_stack(dir, mask.pixels(), [](std::uint8_t v) { return v; });
    std::string states;
    for (auto s : mask.states()) {
        states += to_string(s);
        states += '\n';
    }
    write_text(dir / kFrameStateFile, states);
}

TriMask read_trimask(const fs::path& dir) {
    auto [shape, bytes] = read_stack(dir, 1);
    std::ifstream in(dir / kFrameStateFile);
    if (!in) {
        throw IoError("missing frame-state sidecar " + (dir / kFrameStateFile).string());
    }
    std::vector<FrameState> states;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        states.push_back(frame_state_from_string(line));
    }
    if (states.size() != shape.frames) {
        throw ShapeError(dir.string() + ": frame-state sidecar lists " + std::to_string(states.size()) +
                         " frames, found " + std::to_string(shape.frames) + " frame files");
    }
    TriMask mask(TriPixels(shape, std::move(bytes)), std::move(states));
    if (const auto violation = validate(mask)) {
        throw ValidationError(dir.string() + ": " + violation->message);
    }
    return mask;
}

std::pair<std::size_t, std::size_t> probe_frame_size(const fs::path& dir) {
    PngImage png;
    const fs::path first = dir / frame_filename(0);
    if (!png_image_begin_read_from_file(&png.image, first.c_str())) {
        throw IoError("cannot read PNG " + first.string() + ": " + png.image.message);
    }
    return {png.image.height, png.image.width};
}

}  // namespace layercomp
