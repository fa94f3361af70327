// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/raster.hpp"

#include <cmath>
#include <stdexcept>

#include "mmrt/errors.hpp"
#include "mmrt/hashing.hpp"

namespace mmrt::imaging {

RasterImage::RasterImage(int w, int h, int c, double fill)
    : width(w), height(h), channels(c),
      pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                 static_cast<std::size_t>(c),
             fill) {}

bool valid_raster(const RasterImage& image) {
    if (image.width < 1 || image.height < 1 || image.channels < 1) return false;
    const std::size_t expected = static_cast<std::size_t>(image.width) *
                                 static_cast<std::size_t>(image.height) *
                                 static_cast<std::size_t>(image.channels);
    if (image.pixels.size() != expected) return false;
    for (double v : image.pixels) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
    }
    return true;
}

RasterImage blank_image(int width, int height, double value) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("blank_image: width and height must be >= 1");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument("blank_image: value must be in [0, 1]");
    }
    return RasterImage(width, height, 3, value);
}

std::string to_string(SegmentLabel label) {
    switch (label) {
        case SegmentLabel::Adv: return "adv";
        case SegmentLabel::Opt: return "opt";
        case SegmentLabel::Typ: return "typ";
    }
    return "typ";
}

SegmentLabel segment_label_from_string(const std::string& name) {
    if (name == "adv") return SegmentLabel::Adv;
    if (name == "opt") return SegmentLabel::Opt;
    if (name == "typ") return SegmentLabel::Typ;
    throw std::invalid_argument("unknown segment label: " + name);
}

CompositeImage vstack(std::span<const LabeledPart> parts, double pad_value) {
    if (parts.empty()) throw EmptyInput("vstack: no parts");
    if (!(pad_value >= 0.0 && pad_value <= 1.0)) {
        throw std::invalid_argument("vstack: pad_value must be in [0, 1]");
    }
    const int channels = parts.front().image.channels;
    int out_width = 0;
    int out_height = 0;
    for (const auto& part : parts) {
        if (part.image.channels != channels) {
            throw ChannelMismatch("vstack: parts disagree on channel count");
        }
        out_width = std::max(out_width, part.image.width);
        out_height += part.image.height;
    }

    CompositeImage out;
    out.image = RasterImage(out_width, out_height, channels, pad_value);
    out.segments.reserve(parts.size());

    int row = 0;
    for (const auto& part : parts) {
        const RasterImage& src = part.image;
        const int x0 = center_offset(out_width, src.width);
        for (int y = 0; y < src.height; ++y) {
            for (int x = 0; x < src.width; ++x) {
                for (int c = 0; c < channels; ++c) {
                    out.image.at(x0 + x, row + y, c) = src.at(x, y, c);
                }
            }
        }
        out.segments.push_back({part.label, row, row + src.height});
        row += src.height;
    }
    return out;
}

CompositeImage vstack(std::span<const RasterImage> parts,
                      std::span<const SegmentLabel> labels, double pad_value) {
    if (!labels.empty() && labels.size() != parts.size()) {
        throw std::invalid_argument("vstack: labels must match parts");
    }
    std::vector<LabeledPart> labeled;
    labeled.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        labeled.push_back({parts[i], labels.empty() ? SegmentLabel::Typ : labels[i]});
    }
    return vstack(std::span<const LabeledPart>(labeled), pad_value);
}

RasterImage slice_rows(const RasterImage& image, int row_start, int row_end) {
    if (row_start < 0 || row_end > image.height || row_start >= row_end) {
        throw std::invalid_argument("slice_rows: bad row range");
    }
    RasterImage out(image.width, row_end - row_start, image.channels, 0.0);
    for (int y = row_start; y < row_end; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                out.at(x, y - row_start, c) = image.at(x, y, c);
            }
        }
    }
    return out;
}

RasterImage slice_centered_columns(const RasterImage& image, int part_width) {
    if (part_width < 1 || part_width > image.width) {
        throw std::invalid_argument("slice_centered_columns: bad width");
    }
    const int x0 = center_offset(image.width, part_width);
    RasterImage out(part_width, image.height, image.channels, 0.0);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < part_width; ++x) {
            for (int c = 0; c < image.channels; ++c) {
                out.at(x, y, c) = image.at(x0 + x, y, c);
            }
        }
    }
    return out;
}

bool pixels_equal(const RasterImage& a, const RasterImage& b) {
    return a.same_shape(b) && a.pixels == b.pixels;
}

std::uint64_t image_fingerprint(const RasterImage& image) {
    std::uint64_t h = fnv1a64(&image.width, sizeof image.width);
    h = fnv1a64(&image.height, sizeof image.height, h);
    h = fnv1a64(&image.channels, sizeof image.channels, h);
    for (double v : image.pixels) {
        const auto q = static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        h = fnv1a64(&q, 1, h);
    }
    return h;
}

}  // namespace mmrt::imaging
