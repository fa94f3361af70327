// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "mmrt/raster.hpp"

namespace mmrt::imaging {

/// Deterministic text rendering settings. The glyph set is a bundled bitmap
/// font, so identical (text, style) pairs produce pixel-identical images on
/// every machine.
struct TypographyStyle {
    int canvas_width = 512;
    int font_size = 22;      // target glyph height in px; snapped to an integer scale
    int margin = 16;         // px on all four sides
    int line_spacing = 6;    // px between line boxes
    double foreground = 0.0;
    double background = 1.0;
};

/// Renders `text` word-wrapped onto a fixed-width canvas whose height grows
/// with the number of lines. Throws StyleError when the text is empty or a
/// single glyph cannot fit even at the minimum font size.
RasterImage render_typography(const std::string& text,
                              const TypographyStyle& style = {});

/// Number of wrapped lines the renderer would produce; exposed for sizing
/// logic and tests.
int typography_line_count(const std::string& text, const TypographyStyle& style = {});

}  // namespace mmrt::imaging
