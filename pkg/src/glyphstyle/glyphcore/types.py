"""Domain types for glyph rendering and the benchmark data model."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvariantError

MANIFEST_VERSION = "must-bench/1.0"


class Script(str, enum.Enum):
    LATIN = "latin"
    HANGUL = "hangul"
    HAN = "han"
    CYRILLIC = "cyrillic"
    THAI = "thai"
    ARABIC = "arabic"


class ReviewStatus(str, enum.Enum):
    UNREVIEWED = "unreviewed"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass
class GlyphSpec:
    """A rendered character: black ink on a white square canvas.

    `image` is grayscale float in [0, 1], shape (canvas_px, canvas_px).
    """

    char: str
    script: Script
    font_id: str
    canvas_px: int
    image: np.ndarray

    def validate(self) -> None:
        if len(self.char) != 1:
            raise InvariantError(f"char must be a single code point, got {self.char!r}")
        if self.canvas_px < 32:
            raise InvariantError(f"canvas_px must be >= 32, got {self.canvas_px}")
        if self.image.shape != (self.canvas_px, self.canvas_px):
            raise InvariantError(
                f"image shape {self.image.shape} != canvas ({self.canvas_px}, {self.canvas_px})"
            )
        corners = [self.image[0, 0], self.image[0, -1], self.image[-1, 0], self.image[-1, -1]]
        if min(corners) < 0.95:
            raise InvariantError("corner pixels must be white (>= 0.95)")
        if not self.char.isspace() and float(self.image.min()) > 0.2:
            raise InvariantError("glyph ink must be dark (min pixel <= 0.2)")
        ys, xs = np.nonzero(self.image < 0.5)
        if len(ys) > 0:
            cy = (ys.min() + ys.max() + 1) / 2.0
            cx = (xs.min() + xs.max() + 1) / 2.0
            center = self.canvas_px / 2.0
            tol = 0.10 * self.canvas_px
            if abs(cy - center) > tol or abs(cx - center) > tol:
                raise InvariantError(
                    f"ink bbox center ({cx:.1f}, {cy:.1f}) off canvas center by more than 10%"
                )


@dataclass(frozen=True)
class CharacterBox:
    """One annotated character: integer pixel bbox, origin top-left."""

    char: str
    bbox: tuple[int, int, int, int]  # x, y, w, h
    word_index: int
    char_index: int

    def validate(self, image_w: int | None = None, image_h: int | None = None) -> None:
        x, y, w, h = self.bbox
        if len(self.char) != 1:
            raise InvariantError(f"box char must be a single code point, got {self.char!r}")
        if x < 0 or y < 0:
            raise InvariantError(f"box origin must be non-negative, got ({x}, {y})")
        if w <= 0 or h <= 0:
            raise InvariantError(f"box size must be positive, got ({w}, {h})")
        if self.word_index < 0 or self.char_index < 0:
            raise InvariantError("word_index and char_index must be non-negative")
        if image_w is not None and x + w > image_w:
            raise InvariantError(f"box right edge {x + w} exceeds image width {image_w}")
        if image_h is not None and y + h > image_h:
            raise InvariantError(f"box bottom edge {y + h} exceeds image height {image_h}")


@dataclass
class PosterRecord:
    language: str
    image_uri: str
    width: int
    height: int
    boxes: list[CharacterBox] = field(default_factory=list)

    def validate(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise InvariantError(
                f"poster dimensions must be positive, got {self.width}x{self.height}"
            )
        seen: set[tuple[int, int]] = set()
        for i, box in enumerate(self.boxes):
            try:
                box.validate(self.width, self.height)
            except InvariantError as exc:
                raise InvariantError(f"box {i}: {exc}") from exc
            key = (box.word_index, box.char_index)
            if key in seen:
                raise InvariantError(f"duplicate (word_index, char_index) {key}")
            seen.add(key)

    def ordered_boxes(self) -> list[CharacterBox]:
        return sorted(self.boxes, key=lambda b: (b.word_index, b.char_index))

    def text(self) -> str:
        return "".join(b.char for b in self.ordered_boxes())


@dataclass
class Review:
    status: ReviewStatus = ReviewStatus.UNREVIEWED
    annotator: str = ""
    version: int = 0


@dataclass
class PosterPair:
    pair_id: str
    title: str
    source: PosterRecord
    target: PosterRecord
    review: Review = field(default_factory=Review)

    def validate(self, pivot_language: str | None = None) -> None:
        if not self.pair_id:
            raise InvariantError("pair_id must be non-empty")
        self.source.validate()
        self.target.validate()
        if self.source.language == self.target.language:
            raise InvariantError(
                f"source and target language must differ, both {self.source.language!r}"
            )
        if pivot_language is not None and self.source.language != pivot_language:
            raise InvariantError(
                f"source language {self.source.language!r} != pivot {pivot_language!r}"
            )
        if self.review.status is ReviewStatus.ACCEPTED:
            if not self.source.boxes or not self.target.boxes:
                raise InvariantError(
                    f"accepted pair {self.pair_id!r} must have >= 1 box on both sides"
                )


@dataclass
class BenchManifest:
    version: str
    pivot_language: str
    languages: list[str]
    pairs: list[PosterPair]

    def validate(self) -> None:
        if self.version != MANIFEST_VERSION:
            raise InvariantError(
                f"manifest version {self.version!r} != {MANIFEST_VERSION!r}"
            )
        if self.pivot_language not in self.languages:
            raise InvariantError("pivot_language must appear in languages")
        seen_ids: set[str] = set()
        for pair in self.pairs:
            if pair.pair_id in seen_ids:
                raise InvariantError(f"duplicate pair_id {pair.pair_id!r}")
            seen_ids.add(pair.pair_id)
            pair.validate(self.pivot_language)
            for side in (pair.source, pair.target):
                if side.language not in self.languages:
                    raise InvariantError(
                        f"pair {pair.pair_id!r} references unlisted language {side.language!r}"
                    )

    def pairs_by_language(self) -> dict[str, list[PosterPair]]:
        out: dict[str, list[PosterPair]] = {}
        for pair in self.pairs:
            out.setdefault(pair.target.language, []).append(pair)
        return out


@dataclass
class StyleSubject:
    """A named typographic style: 3-5 reference images plus glyph targets."""

    subject_id: str
    style_images: list[np.ndarray]  # RGB float [0,1], uniform HxWx3
    glyph_targets: list[GlyphSpec]
    prompt_template_id: str = "default"
    style_image_tags: list[str] = field(default_factory=list)

    def validate(self, max_style_images: int = 5, max_glyphs: int = 2) -> None:
        n = len(self.style_images)
        if not 3 <= n <= max_style_images:
            raise InvariantError(
                f"subject {self.subject_id!r} needs 3..{max_style_images} style images, got {n}"
            )
        shapes = {img.shape for img in self.style_images}
        if len(shapes) > 1:
            raise InvariantError(f"style images must share one size, got {shapes}")
        if not 1 <= len(self.glyph_targets) <= max_glyphs:
            raise InvariantError(
                f"subject {self.subject_id!r} needs 1..{max_glyphs} glyph targets, "
                f"got {len(self.glyph_targets)}"
            )
        if self.style_image_tags and len(self.style_image_tags) != n:
            raise InvariantError("style_image_tags length must match style_images")
