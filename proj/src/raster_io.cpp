// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/raster_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "mmrt/errors.hpp"

namespace mmrt::imaging {

namespace {

unsigned char quantize(double v) {
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return static_cast<unsigned char>(std::lround(v * 255.0));
}

struct ByteCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }
    std::uint8_t peek() const { return bytes[pos]; }
    std::uint8_t take() { return bytes[pos++]; }

    // Skips whitespace and '#' comments between header tokens.
    void skip_separators() {
        while (!eof()) {
            if (std::isspace(peek())) {
                ++pos;
            } else if (peek() == '#') {
                while (!eof() && take() != '\n') {
                }
            } else {
                break;
            }
        }
    }

    int next_int() {
        skip_separators();
        if (eof() || !std::isdigit(peek())) throw DecodeError("ppm: expected integer");
        long value = 0;
        while (!eof() && std::isdigit(peek())) {
            value = value * 10 + (take() - '0');
            if (value > 1'000'000'000) throw DecodeError("ppm: integer overflow");
        }
        return static_cast<int>(value);
    }
};

}  // namespace

std::vector<std::uint8_t> encode_ppm(const RasterImage& image) {
    if (image.width < 1 || image.height < 1 ||
        (image.channels != 3 && image.channels != 1)) {
        throw std::invalid_argument("encode_ppm: unsupported image shape");
    }
    char header[64];
    const int n = std::snprintf(header, sizeof header, "%s\n%d %d\n255\n",
                                image.channels == 3 ? "P6" : "P5", image.width,
                                image.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.reserve(out.size() + image.pixels.size());
    for (double v : image.pixels) out.push_back(quantize(v));
    return out;
}

RasterImage decode_ppm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
        throw DecodeError("ppm: bad magic");
    }
    const int source_channels = bytes[1] == '6' ? 3 : 1;
    ByteCursor cur{bytes, 2};
    const int width = cur.next_int();
    const int height = cur.next_int();
    const int maxval = cur.next_int();
    if (width < 1 || height < 1) throw DecodeError("ppm: bad dimensions");
    if (maxval != 255) throw DecodeError("ppm: only maxval 255 supported");
    if (cur.eof() || !std::isspace(cur.peek())) throw DecodeError("ppm: bad header");
    cur.take();  // single whitespace byte before raster data

    const std::size_t need = static_cast<std::size_t>(width) *
                             static_cast<std::size_t>(height) *
                             static_cast<std::size_t>(source_channels);
    if (bytes.size() - cur.pos < need) throw DecodeError("ppm: truncated pixel data");

    // Grayscale sources are replicated so the in-memory contract is always
    // three channels.
    RasterImage image(width, height, 3, 0.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i) {
        for (int c = 0; c < 3; ++c) {
            const std::size_t src = cur.pos + i * source_channels +
                                    (source_channels == 3 ? static_cast<std::size_t>(c) : 0);
            image.pixels[i * 3 + c] = static_cast<double>(bytes[src]) / 255.0;
        }
    }
    return image;
}

void write_raster(const std::filesystem::path& path, const RasterImage& image) {
    const auto bytes = encode_ppm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open for write: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

RasterImage read_raster(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for read: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_ppm(bytes);
}

}  // namespace mmrt::imaging
