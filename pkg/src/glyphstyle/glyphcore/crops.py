"""Character-crop extraction and source/target sequence alignment."""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import DecodeError, DimensionMismatch, NotAccepted
from .types import CharacterBox, PosterPair, PosterRecord, ReviewStatus


def decode_image(image_bytes: bytes) -> np.ndarray:
    """PNG/image bytes -> uint8 RGB array."""
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            return np.asarray(img.convert("RGB"))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"could not decode image: {exc}") from exc


def crop_characters(
    record: PosterRecord, image_bytes: bytes
) -> list[tuple[CharacterBox, np.ndarray]]:
    """One exact-pixel crop per box, ordered by (word_index, char_index)."""
    arr = decode_image(image_bytes)
    h, w = arr.shape[:2]
    if (w, h) != (record.width, record.height):
        raise DimensionMismatch(
            f"image is {w}x{h} but record declares {record.width}x{record.height}"
        )
    record.validate()
    crops = []
    for box in record.ordered_boxes():
        x, y, bw, bh = box.bbox
        crops.append((box, arr[y : y + bh, x : x + bw].copy()))
    return crops


def paste_crop(image: np.ndarray, box: CharacterBox, crop: np.ndarray) -> np.ndarray:
    """Inverse of cropping; used by the round-trip oracle."""
    out = image.copy()
    x, y, w, h = box.bbox
    out[y : y + h, x : x + w] = crop
    return out


@dataclass
class CharacterSetPair:
    source_crops: list[np.ndarray]
    target_crops: list[np.ndarray]
    source_text: str
    target_text: str


def pair_character_sets(
    pair: PosterPair, image_provider: Callable[[str], bytes]
) -> CharacterSetPair:
    """Aligned character sequences for one accepted pair.

    `image_provider` maps an image_uri to raw image bytes.
    """
    if pair.review.status is not ReviewStatus.ACCEPTED:
        raise NotAccepted(
            f"pair {pair.pair_id!r} has status {pair.review.status.value!r}, need accepted"
        )
    src = crop_characters(pair.source, image_provider(pair.source.image_uri))
    tgt = crop_characters(pair.target, image_provider(pair.target.image_uri))
    return CharacterSetPair(
        source_crops=[c for _, c in src],
        target_crops=[c for _, c in tgt],
        source_text="".join(b.char for b, _ in src),
        target_text="".join(b.char for b, _ in tgt),
    )
