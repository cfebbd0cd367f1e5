"""Synthetic TTF builder for scripts the host system has no fonts for.

Each requested code point gets a deterministic blocky stroke pattern
derived from the code point value. The output is a real TTF consumed by
the normal rendering path, so coverage checks, rasterization, and OCR
training all exercise production code, just with stand-in shapes.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from fontTools.fontBuilder import FontBuilder
from fontTools.pens.ttGlyphPen import TTGlyphPen

_UPM = 1000
_GRID = 5
_CELL = 160
_ORIGIN_X = 100
_ORIGIN_Y = 0


def _stroke_cells(char: str) -> np.ndarray:
    """Deterministic 5x5 occupancy grid for a code point, connected enough
    to read as a single ink component."""
    rng = np.random.default_rng(ord(char))
    cells = np.zeros((_GRID, _GRID), dtype=bool)
    # Spine keeps every pattern one connected component.
    col = int(rng.integers(1, _GRID - 1))
    cells[:, col] = True
    for _ in range(int(rng.integers(2, 5))):
        row = int(rng.integers(0, _GRID))
        c0 = int(rng.integers(0, _GRID - 1))
        c1 = int(rng.integers(c0 + 1, _GRID))
        cells[row, c0 : c1 + 1] = True
    return cells


def _draw_cells(pen: TTGlyphPen, cells: np.ndarray) -> None:
    for r in range(_GRID):
        for c in range(_GRID):
            if not cells[r, c]:
                continue
            x0 = _ORIGIN_X + c * _CELL
            # Row 0 is the visual top.
            y0 = _ORIGIN_Y + (_GRID - 1 - r) * _CELL
            pen.moveTo((x0, y0))
            pen.lineTo((x0 + _CELL, y0))
            pen.lineTo((x0 + _CELL, y0 + _CELL))
            pen.lineTo((x0, y0 + _CELL))
            pen.closePath()


def build_synthetic_font(chars: str, out_path: str | Path, family: str = "GlyphStub") -> Path:
    """Write a TTF covering exactly `chars` and return its path."""
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    glyph_order = [".notdef"] + [f"uni{ord(c):04X}" for c in chars]
    cmap = {ord(c): f"uni{ord(c):04X}" for c in chars}

    fb = FontBuilder(_UPM, isTTF=True)
    fb.setupGlyphOrder(glyph_order)
    fb.setupCharacterMap(cmap)

    glyphs = {}
    pen = TTGlyphPen(None)
    pen.moveTo((50, 0))
    pen.lineTo((950, 0))
    pen.lineTo((950, 800))
    pen.lineTo((50, 800))
    pen.closePath()
    glyphs[".notdef"] = pen.glyph()
    for c in chars:
        pen = TTGlyphPen(None)
        _draw_cells(pen, _stroke_cells(c))
        glyphs[cmap[ord(c)]] = pen.glyph()
    fb.setupGlyf(glyphs)

    advance = _ORIGIN_X * 2 + _GRID * _CELL
    fb.setupHorizontalMetrics({name: (advance, 0) for name in glyph_order})
    fb.setupHorizontalHeader(ascent=_GRID * _CELL, descent=-100)
    fb.setupNameTable({"familyName": family, "styleName": "Regular"})
    fb.setupOS2(sTypoAscender=_GRID * _CELL, sTypoDescender=-100, usWinAscent=_GRID * _CELL, usWinDescent=100)
    fb.setupPost()
    fb.save(str(out_path))
    return out_path
