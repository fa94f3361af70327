// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mmrt/raster.hpp"

namespace mmrt::imaging {

/// Lossless 8-bit-per-channel raster codec (binary PPM/PGM). Values are
/// mapped linearly between [0, 1] and 0..255; a save/load round trip changes
/// each pixel by at most 1/255 (rounding).
std::vector<std::uint8_t> encode_ppm(const RasterImage& image);

/// Decodes P6 (RGB) and P5 (grayscale, replicated to 3 channels).
/// Throws DecodeError on malformed input.
RasterImage decode_ppm(std::span<const std::uint8_t> bytes);

void write_raster(const std::filesystem::path& path, const RasterImage& image);
RasterImage read_raster(const std::filesystem::path& path);

}  // namespace mmrt::imaging
