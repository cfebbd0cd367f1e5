"""Glyph rasterization: character -> centered black-on-white canvas."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fontTools.ttLib import TTFont
from PIL import Image, ImageDraw, ImageFont

from ..errors import ConfigError, DegenerateGlyph, UnsupportedCodepoint
from .types import GlyphSpec, Script

_DEJAVU_DIR = Path("/usr/share/fonts/truetype/dejavu")

_DEFAULT_FONTS = {
    "default_sans": _DEJAVU_DIR / "DejaVuSans.ttf",
    "default_sans_bold": _DEJAVU_DIR / "DejaVuSans-Bold.ttf",
    "default_serif": _DEJAVU_DIR / "DejaVuSerif.ttf",
    "default_serif_bold": _DEJAVU_DIR / "DejaVuSerif-Bold.ttf",
    "default_mono": _DEJAVU_DIR / "DejaVuSansMono.ttf",
    "default_mono_bold": _DEJAVU_DIR / "DejaVuSansMono-Bold.ttf",
}


@dataclass(frozen=True)
class _FontEntry:
    path: Path
    codepoints: frozenset[int]


class FontRegistry:
    """Maps font ids to font files and answers code-point coverage queries."""

    def __init__(self, fonts: dict[str, str | Path] | None = None):
        self._entries: dict[str, _FontEntry] = {}
        for font_id, path in (fonts or {}).items():
            self.register(font_id, path)

    def register(self, font_id: str, path: str | Path) -> None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"font file not found: {path}")
        self._entries[font_id] = _FontEntry(path, _font_codepoints(path))

    def font_ids(self) -> list[str]:
        return sorted(self._entries)

    def path(self, font_id: str) -> Path:
        return self._entry(font_id).path

    def supports(self, font_id: str, char: str) -> bool:
        return ord(char) in self._entry(font_id).codepoints

    def _entry(self, font_id: str) -> _FontEntry:
        if font_id not in self._entries:
            raise ConfigError(
                f"unknown font_id {font_id!r}; registered: {self.font_ids()}"
            )
        return self._entries[font_id]


@functools.lru_cache(maxsize=64)
def _font_codepoints(path: Path) -> frozenset[int]:
    with TTFont(str(path), lazy=True) as tt:
        cmap = tt.getBestCmap()
        return frozenset(cmap.keys())


def default_font_registry() -> FontRegistry:
    """Registry over the fonts shipped with the host system."""
    available = {fid: p for fid, p in _DEFAULT_FONTS.items() if p.exists()}
    return FontRegistry(available)


@functools.lru_cache(maxsize=64)
def _load_pil_font(path: str, size: int) -> ImageFont.FreeTypeFont:
    return ImageFont.truetype(path, size)


def render_glyph(
    char: str,
    script: Script | str,
    font_id: str,
    canvas_px: int = 64,
    registry: FontRegistry | None = None,
) -> GlyphSpec:
    """Render one character as black ink centered on a white square canvas.

    Deterministic for fixed arguments. Raises UnsupportedCodepoint when the
    font's cmap lacks the character and DegenerateGlyph when the render has
    no ink (whitespace and friends).
    """
    if len(char) != 1:
        raise ConfigError(f"char must be a single code point, got {char!r}")
    if canvas_px < 32:
        raise ConfigError(f"canvas_px must be >= 32, got {canvas_px}")
    script = Script(script)
    registry = registry if registry is not None else default_font_registry()
    if not registry.supports(font_id, char):
        raise UnsupportedCodepoint(
            f"font {font_id!r} has no glyph for U+{ord(char):04X} ({char!r})"
        )

    font = _load_pil_font(str(registry.path(font_id)), int(canvas_px * 0.75))

    # Oversized scratch render; the ink bbox is then recentered exactly.
    scratch_px = canvas_px * 3
    scratch = Image.new("L", (scratch_px, scratch_px), 255)
    draw = ImageDraw.Draw(scratch)
    draw.text((scratch_px // 2, scratch_px // 2), char, font=font, fill=0, anchor="mm")
    arr = np.asarray(scratch, dtype=np.float32) / 255.0

    ys, xs = np.nonzero(arr < 0.95)
    if len(ys) == 0:
        raise DegenerateGlyph(f"no ink rendered for {char!r}")
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    ink = arr[y0:y1, x0:x1]

    # Downscale only if the ink overflows the margin-padded canvas.
    max_side = int(canvas_px * 0.85)
    h, w = ink.shape
    if max(h, w) > max_side:
        scale = max_side / max(h, w)
        new_w = max(1, int(round(w * scale)))
        new_h = max(1, int(round(h * scale)))
        ink_img = Image.fromarray((ink * 255).astype(np.uint8))
        ink_img = ink_img.resize((new_w, new_h), Image.BILINEAR)
        ink = np.asarray(ink_img, dtype=np.float32) / 255.0
        h, w = ink.shape

    canvas = np.ones((canvas_px, canvas_px), dtype=np.float32)
    top = (canvas_px - h) // 2
    left = (canvas_px - w) // 2
    canvas[top : top + h, left : left + w] = ink

    spec = GlyphSpec(char=char, script=script, font_id=font_id, canvas_px=canvas_px, image=canvas)
    spec.validate()
    return spec
