"""Synthetic styled-text corpus: a desk-scale stand-in for real posters.

Each style subject applies one style family (shared base hue, shared
background treatment) to a handful of distinct characters, giving the
3-5 reference images a training run needs. Poster-like defaults are
bright saturated ink on a dark background.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from .render import FontRegistry, default_font_registry, render_glyph
from .types import GlyphSpec, Script, StyleSubject

STYLE_FAMILIES = ("solid", "gradient", "outline", "texture")


@dataclass
class CorpusConfig:
    styles: list[str]
    chars: str                      # pool the style reference characters come from
    glyph_chars: str                # characters the subject will be trained to draw
    n_refs: int = 4
    font_id: str = "default_sans"
    canvas_px: int = 64
    script: Script = Script.LATIN
    seed: int = 0
    dark_background: bool = True
    max_glyphs_per_subject: int = 2
    prompt_template_id: str = "default"
    registry: FontRegistry | None = None

    def validate(self) -> None:
        if not self.styles:
            raise ConfigError("config needs >= 1 style family")
        for s in self.styles:
            if s not in STYLE_FAMILIES:
                raise ConfigError(f"unknown style family {s!r}; known: {STYLE_FAMILIES}")
        if not 3 <= self.n_refs <= 5:
            raise ConfigError(f"n_refs must be in 3..5, got {self.n_refs}")
        if len(set(self.chars)) < self.n_refs:
            raise ConfigError(
                f"need >= {self.n_refs} distinct reference chars, got {sorted(set(self.chars))}"
            )
        if not self.glyph_chars:
            raise ConfigError("config needs >= 1 glyph target char")


def _hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    h = (h % 360.0) / 60.0
    i = np.floor(h).astype(int) % 6
    f = h - np.floor(h)
    p = v * (1 - s)
    q = v * (1 - f * s)
    t = v * (1 - (1 - f) * s)
    rgb = np.select(
        [i == 0, i == 1, i == 2, i == 3, i == 4, i == 5],
        [
            np.stack([v, t, p], -1),
            np.stack([q, v, p], -1),
            np.stack([p, v, t], -1),
            np.stack([p, q, v], -1),
            np.stack([t, p, v], -1),
            np.stack([v, p, q], -1),
        ],
    )
    return rgb


def _background(shape: tuple[int, int], rng: np.random.Generator, dark: bool) -> np.ndarray:
    h, w = shape
    base = 0.08 if dark else 0.92
    rows = np.linspace(-0.03, 0.03, h)[:, None]
    noise = rng.normal(0.0, 0.01, size=(h, w))
    value = np.clip(base + rows + noise, 0.0, 1.0)
    return np.repeat(value[:, :, None], 3, axis=2).astype(np.float32)


def _ink_layer(
    family: str,
    mask: np.ndarray,
    hue: float,
    rng: np.random.Generator,
) -> np.ndarray:
    h, w = mask.shape
    hue_arr = np.full((h, w), hue)
    sat = np.full((h, w), 0.85)
    if family == "solid":
        val = np.full((h, w), 0.95)
    elif family == "gradient":
        val = np.tile(np.linspace(0.45, 1.0, h)[:, None], (1, w))
    elif family == "outline":
        # Hollow strokes: interior much darker than the rim.
        from scipy import ndimage

        hard = mask > 0.5
        interior = ndimage.binary_erosion(hard, iterations=2)
        val = np.where(interior, 0.25, 0.95)
        sat = np.where(interior, 0.4, 0.85)
    elif family == "texture":
        speckle = rng.normal(0.0, 0.18, size=(h, w))
        from scipy import ndimage

        speckle = ndimage.gaussian_filter(speckle, sigma=1.2)
        val = np.clip(0.8 + speckle, 0.3, 1.0)
    else:
        raise ConfigError(f"unknown style family {family!r}")
    return _hsv_to_rgb(hue_arr, sat, val).astype(np.float32)


def render_styled_char(
    char: str,
    family: str,
    hue: float,
    config: CorpusConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """One styled character image (RGB float [0,1])."""
    registry = config.registry if config.registry is not None else default_font_registry()
    glyph = render_glyph(char, config.script, config.font_id, config.canvas_px, registry)
    mask = 1.0 - glyph.image  # ink=1, background=0, anti-aliased edges between
    bg = _background(mask.shape, rng, config.dark_background)
    ink = _ink_layer(family, mask, hue, rng)
    return (bg * (1.0 - mask[:, :, None]) + ink * mask[:, :, None]).astype(np.float32)


def build_synthetic_style_corpus(config: CorpusConfig) -> list[StyleSubject]:
    """One StyleSubject per configured style family. Deterministic under
    config.seed: two runs produce bit-identical images."""
    config.validate()
    registry = config.registry if config.registry is not None else default_font_registry()

    subjects = []
    for subject_idx, family in enumerate(config.styles):
        rng = np.random.default_rng(
            np.random.SeedSequence([config.seed, subject_idx])
        )
        hue = float(rng.uniform(0.0, 360.0))
        ref_chars = list(dict.fromkeys(config.chars))[: config.n_refs]

        images, tags = [], []
        for c in ref_chars:
            jitter = float(rng.uniform(-4.0, 4.0))
            images.append(render_styled_char(c, family, hue + jitter, config, rng))
            tags.append(f"style:{family}:{c}")

        glyph_targets: list[GlyphSpec] = [
            render_glyph(c, config.script, config.font_id, config.canvas_px, registry)
            for c in config.glyph_chars[: config.max_glyphs_per_subject]
        ]

        subject = StyleSubject(
            subject_id=f"{family}-{subject_idx}",
            style_images=images,
            glyph_targets=glyph_targets,
            prompt_template_id=config.prompt_template_id,
            style_image_tags=tags,
        )
        subject.validate(max_glyphs=config.max_glyphs_per_subject)
        subjects.append(subject)
    return subjects
