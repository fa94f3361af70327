#!/usr/bin/env python3
# Copyright (c) 2026 the mmrt authors
# SPDX-License-Identifier: Apache-2.0
"""Bake a fixed 6x11 ASCII bitmap font into a C++ table.

Rasterizes printable ASCII (32..126) with Pillow's embedded bitmap font and
emits src/font6x11_data.inc. The table is committed so rendering never depends
on system fonts; re-run this script only if the glyph set needs to change.
"""

import sys
from PIL import Image, ImageDraw, ImageFont

CELL_W = 6
CELL_H = 11
FIRST = 32
LAST = 126


def glyph_rows(font, ch: str) -> list[int]:
    img = Image.new("L", (CELL_W + 4, CELL_H + 4), 0)
    ImageDraw.Draw(img).text((0, 0), ch, fill=255, font=font)
    px = img.load()
    rows = []
    for y in range(CELL_H):
        bits = 0
        for x in range(CELL_W):
            if px[x, y] >= 128:
                bits |= 1 << (CELL_W - 1 - x)
        rows.append(bits)
    return rows


def main(out_path: str) -> None:
    font = ImageFont.load_default_imagefont()
    lines = [
        "// Generated by scripts/make_font_table.py -- do not edit by hand.",
        "// 6x11 monospace bitmap glyphs for ASCII 32..126, one uint16_t per row,",
        "// MSB of the low 6 bits is the leftmost column.",
        "",
    ]
    lines.append("inline constexpr int kFontGlyphWidth = %d;" % CELL_W)
    lines.append("inline constexpr int kFontGlyphHeight = %d;" % CELL_H)
    lines.append("inline constexpr int kFontFirstChar = %d;" % FIRST)
    lines.append("inline constexpr int kFontLastChar = %d;" % LAST)
    lines.append("")
    lines.append(
        "inline constexpr std::uint16_t kFontGlyphs[%d][%d] = {"
        % (LAST - FIRST + 1, CELL_H)
    )
    for code in range(FIRST, LAST + 1):
        ch = chr(code)
        rows = glyph_rows(font, ch)
        body = ", ".join("0x%02x" % r for r in rows)
        name = ch if ch != "\\" else "backslash"
        lines.append("    {%s},  // %d '%s'" % (body, code, name))
    lines.append("};")
    lines.append("")
    with open(out_path, "w") as fh:
        fh.write("\n".join(lines))
    print("wrote", out_path)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/font6x11_data.inc")
