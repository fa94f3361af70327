// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mmrt::imaging {

/// Row-major pixel grid with values in [0, 1]. The single image currency of
/// the whole pipeline; three channels everywhere, grayscale sources are
/// replicated on load.
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 3;
    std::vector<double> pixels;  // width * height * channels

    RasterImage() = default;
    RasterImage(int w, int h, int c, double fill);

    double at(int x, int y, int c) const {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }
    double& at(int x, int y, int c) {
        return pixels[static_cast<std::size_t>((y * width + x) * channels + c)];
    }

    std::size_t pixel_count() const { return pixels.size(); }
    bool same_shape(const RasterImage& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }
};

/// True when dimensions are sane and every value sits inside [0, 1].
bool valid_raster(const RasterImage& image);

/// Uniform image of `value`; width and height must be >= 1, value in [0, 1].
RasterImage blank_image(int width, int height, double value);

enum class SegmentLabel { Adv, Opt, Typ };

std::string to_string(SegmentLabel label);
SegmentLabel segment_label_from_string(const std::string& name);

/// Half-open row span [row_start, row_end) occupied by one stacked part.
struct Segment {
    SegmentLabel label = SegmentLabel::Typ;
    int row_start = 0;
    int row_end = 0;
};

/// A vertically stacked image plus the provenance of each row band.
/// Segments are contiguous, non-overlapping, top to bottom, covering all rows.
struct CompositeImage {
    RasterImage image;
    std::vector<Segment> segments;
};

struct LabeledPart {
    RasterImage image;
    SegmentLabel label = SegmentLabel::Typ;
};

/// Stack parts top to bottom. Output width is the max part width; narrower
/// parts are horizontally centered and padded with `pad_value`. Throws
/// EmptyInput / ChannelMismatch.
CompositeImage vstack(std::span<const LabeledPart> parts, double pad_value);

/// Convenience overload when the label layout is uniform or irrelevant.
CompositeImage vstack(std::span<const RasterImage> parts,
                      std::span<const SegmentLabel> labels, double pad_value);

/// Copy of rows [row_start, row_end).
RasterImage slice_rows(const RasterImage& image, int row_start, int row_end);

/// Column offset at which a part of `part_width` was centered in `total_width`.
inline int center_offset(int total_width, int part_width) {
    return (total_width - part_width) / 2;
}

/// Copy of the `part_width` columns centered in the image; inverse of the
/// padding applied by vstack.
RasterImage slice_centered_columns(const RasterImage& image, int part_width);

bool pixels_equal(const RasterImage& a, const RasterImage& b);

/// FNV fingerprint of the 8-bit quantization of the image; stable across a
/// lossless save/load round trip.
std::uint64_t image_fingerprint(const RasterImage& image);

}  // namespace mmrt::imaging
