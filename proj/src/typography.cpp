// Copyright (c) 2026 the mmrt authors
// SPDX-License-Identifier: Apache-2.0
#include "mmrt/typography.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include "mmrt/errors.hpp"
#include "mmrt/strings.hpp"

namespace mmrt::imaging {

namespace {

#include "font6x11_data.inc"

int glyph_index(char ch) {
    const int code = static_cast<unsigned char>(ch);
    if (code < kFontFirstChar || code > kFontLastChar) {
        return '?' - kFontFirstChar;  // out-of-table bytes render as '?'
    }
    return code - kFontFirstChar;
}

struct LayoutPlan {
    int scale = 1;
    std::vector<std::string> lines;
};

LayoutPlan plan_layout(const std::string& text, const TypographyStyle& style) {
    const std::string trimmed = trim(text);
    if (trimmed.empty()) throw StyleError("typography: empty text");
    if (style.canvas_width < 1) throw StyleError("typography: bad canvas width");
    if (!(style.foreground >= 0.0 && style.foreground <= 1.0) ||
        !(style.background >= 0.0 && style.background <= 1.0)) {
        throw StyleError("typography: intensities must be in [0, 1]");
    }

    const int usable = style.canvas_width - 2 * style.margin;
    int scale = std::max(1, style.font_size / kFontGlyphHeight);
    while (scale > 1 && usable < kFontGlyphWidth * scale) --scale;
    if (usable < kFontGlyphWidth * scale) {
        throw StyleError("typography: canvas cannot fit one glyph at minimum size");
    }
    const int max_chars = usable / (kFontGlyphWidth * scale);

    // Greedy word wrap; words longer than a line hard-break at glyph level.
    LayoutPlan plan;
    plan.scale = scale;
    std::string line;
    auto flush = [&] {
        if (!line.empty()) {
            plan.lines.push_back(line);
            line.clear();
        }
    };
    std::size_t pos = 0;
    while (pos < trimmed.size()) {
        std::size_t space = trimmed.find(' ', pos);
        std::string word = trimmed.substr(pos, space == std::string::npos
                                                   ? std::string::npos
                                                   : space - pos);
        pos = space == std::string::npos ? trimmed.size() : space + 1;
        if (word.empty()) continue;
        while (static_cast<int>(word.size()) > max_chars) {
            flush();
            plan.lines.push_back(word.substr(0, static_cast<std::size_t>(max_chars)));
            word.erase(0, static_cast<std::size_t>(max_chars));
        }
        if (word.empty()) continue;
        const std::size_t needed = line.empty() ? word.size() : line.size() + 1 + word.size();
        if (static_cast<int>(needed) > max_chars) flush();
        if (!line.empty()) line += ' ';
        line += word;
    }
    flush();
    if (plan.lines.empty()) throw StyleError("typography: nothing to render");
    return plan;
}

}  // namespace

int typography_line_count(const std::string& text, const TypographyStyle& style) {
    return static_cast<int>(plan_layout(text, style).lines.size());
}

RasterImage render_typography(const std::string& text, const TypographyStyle& style) {
    const LayoutPlan plan = plan_layout(text, style);
    const int scale = plan.scale;
    const int line_height = kFontGlyphHeight * scale;
    const int n_lines = static_cast<int>(plan.lines.size());
    const int height = 2 * style.margin + n_lines * line_height +
                       (n_lines - 1) * style.line_spacing;

    RasterImage image(style.canvas_width, height, 3, style.background);
    for (int li = 0; li < n_lines; ++li) {
        const std::string& line = plan.lines[static_cast<std::size_t>(li)];
        const int line_width = static_cast<int>(line.size()) * kFontGlyphWidth * scale;
        const int y0 = style.margin + li * (line_height + style.line_spacing);
        int x0 = (style.canvas_width - line_width) / 2;  // lines are centered
        for (char ch : line) {
            const std::uint16_t* rows = kFontGlyphs[glyph_index(ch)];
            for (int gy = 0; gy < kFontGlyphHeight; ++gy) {
                for (int gx = 0; gx < kFontGlyphWidth; ++gx) {
                    if (!(rows[gy] >> (kFontGlyphWidth - 1 - gx) & 1u)) continue;
                    for (int sy = 0; sy < scale; ++sy) {
                        for (int sx = 0; sx < scale; ++sx) {
                            const int px = x0 + gx * scale + sx;
                            const int py = y0 + gy * scale + sy;
                            if (px < 0 || px >= image.width) continue;
                            image.at(px, py, 0) = style.foreground;
                            image.at(px, py, 1) = style.foreground;
                            image.at(px, py, 2) = style.foreground;
                        }
                    }
                }
            }
            x0 += kFontGlyphWidth * scale;
        }
    }
    return image;
}

}  // namespace mmrt::imaging
