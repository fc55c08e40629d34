// Copyright (C) 2026 The layercomp Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "layercomp/frame_io.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace layercomp;

TEST(Quantize, RoundsAndClamps) {
    EXPECT_EQ(quantize8(0.0f), 0);
    EXPECT_EQ(quantize8(1.0f), 255);
    EXPECT_EQ(quantize8(-3.0f), 0);
    EXPECT_EQ(quantize8(7.0f), 255);
    EXPECT_EQ(quantize8(0.5f), 128);
    for (int v = 0; v < 256; ++v) {
        ASSERT_EQ(quantize8(dequantize8(static_cast<std::uint8_t>(v))), v);
    }
}

TEST(FrameFiles, NamesAreOneBased) {
    EXPECT_EQ(frame_filename(0), "frame_000001.png");
    EXPECT_EQ(frame_filename(122), "frame_000123.png");
}

TEST(Png, RoundTrip) {
    testutil::TempDir dir;
    Image8 img{3, 5, 3, {}};
    for (std::size_t i = 0; i < 45; ++i) {
        img.pixels.push_back(static_cast<std::uint8_t>(i * 5));
    }
    write_png(dir / "a.png", img);
    const auto back = read_png(dir / "a.png", 3);
    EXPECT_EQ(back.height, 3u);
    EXPECT_EQ(back.width, 5u);
    EXPECT_EQ(back.pixels, img.pixels);
    EXPECT_THROW(read_png(dir / "missing.png", 3), IoError);
}

TEST(Clip, RoundTripIsQuantized) {
    testutil::TempDir dir;
    std::mt19937_64 rng(31);
    VideoClip clip = oracle::random_clip(rng, Shape{4, 6, 8});
    clip.set_fps({30000, 1001});
    write_clip(dir / "c", clip);
    EXPECT_EQ(count_frames(dir / "c"), 4u);
    EXPECT_EQ(probe_frame_size(dir / "c"), (std::pair<std::size_t, std::size_t>{6, 8}));
    const auto back = read_clip(dir / "c");
    EXPECT_EQ(back.shape(), clip.shape());
    EXPECT_EQ(back.fps(), clip.fps());
    for (std::size_t i = 0; i < clip.values().size(); ++i) {
        ASSERT_EQ(back.values()[i], dequantize8(quantize8(clip.values()[i])));
    }
}

TEST(Clip, RewriteRemovesStaleFrames) {
    testutil::TempDir dir;
    write_clip(dir / "c", VideoClip(Shape{5, 2, 2}));
    write_clip(dir / "c", VideoClip(Shape{2, 2, 2}));
    EXPECT_EQ(count_frames(dir / "c"), 2u);
    EXPECT_FALSE(std::filesystem::exists(dir / "c" / frame_filename(2)));
}

TEST(Clip, MismatchedFrameSizesRejected) {
    testutil::TempDir dir;
    write_clip(dir / "a", VideoClip(Shape{2, 2, 2}));
    write_clip(dir / "b", VideoClip(Shape{1, 3, 2}));
    std::filesystem::copy_file(dir / "b" / frame_filename(0), dir / "a" / frame_filename(2));
    EXPECT_THROW(read_clip(dir / "a"), ShapeError);
}

TEST(Clip, EmptyDirectoryIsIoError) {
    testutil::TempDir dir;
    std::filesystem::create_directories(dir / "empty");
    EXPECT_THROW(read_clip(dir / "empty"), IoError);
}

TEST(Mask, BinaryAndAlphaRoundTrip) {
    testutil::TempDir dir;
    std::mt19937_64 rng(32);
    const auto m = oracle::random_mask(rng, Shape{3, 5, 4});
    write_binary_mask(dir / "m", m);
    EXPECT_EQ(read_binary_mask(dir / "m"), m);

    const auto a = oracle::random_alpha(rng, Shape{3, 5, 4});
    write_alpha(dir / "a", a);
    const auto back = read_alpha(dir / "a");
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        ASSERT_NEAR(back.values()[i], a.values()[i], 0.5 / 255 + 1e-7);
    }
}

TEST(Mask, TriMaskRoundTrip) {
    testutil::TempDir dir;
    std::mt19937_64 rng(33);
    const auto tri = gray_augment(from_binary(oracle::random_mask(rng, Shape{8, 4, 4})), 0.5, 3);
    write_trimask(dir / "t", tri);
    EXPECT_TRUE(std::filesystem::exists(dir / "t" / kFrameStateFile));
    EXPECT_EQ(read_trimask(dir / "t"), tri);
}

TEST(Mask, TriMaskWithBadPixelRejected) {
    testutil::TempDir dir;
    write_trimask(dir / "t", TriMask::uniform_unknown(Shape{1, 2, 2}));
    write_png(dir / "t" / frame_filename(0), Image8{2, 2, 1, {128, 128, 5, 128}});
    EXPECT_THROW(read_trimask(dir / "t"), ValidationError);
}
