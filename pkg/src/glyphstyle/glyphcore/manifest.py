"""Benchmark manifest serialization: UTF-8 JSON, version "must-bench/1.0"."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..errors import InvariantError, SchemaError
from .types import (
    MANIFEST_VERSION,
    BenchManifest,
    CharacterBox,
    PosterPair,
    PosterRecord,
    Review,
    ReviewStatus,
)


def _expect(obj: dict, key: str, typ: type | tuple, where: str) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, typ):
        raise SchemaError(
            f"{where}.{key}: expected {typ}, got {type(val).__name__}"
        )
    # bool is an int subclass; reject it where an int is expected.
    if typ is int and isinstance(val, bool):
        raise SchemaError(f"{where}.{key}: expected int, got bool")
    return val


def _box_from_dict(d: dict, where: str) -> CharacterBox:
    char = _expect(d, "char", str, where)
    bbox = _expect(d, "bbox", list, where)
    if len(bbox) != 4 or not all(isinstance(v, int) and not isinstance(v, bool) for v in bbox):
        raise SchemaError(f"{where}.bbox: expected 4 integers, got {bbox!r}")
    word_index = _expect(d, "word_index", int, where)
    char_index = _expect(d, "char_index", int, where)
    return CharacterBox(char=char, bbox=tuple(bbox), word_index=word_index, char_index=char_index)


def _record_from_dict(d: dict, where: str) -> PosterRecord:
    return PosterRecord(
        language=_expect(d, "language", str, where),
        image_uri=_expect(d, "image_uri", str, where),
        width=_expect(d, "width", int, where),
        height=_expect(d, "height", int, where),
        boxes=[_box_from_dict(b, f"{where}.boxes[{i}]") for i, b in enumerate(_expect(d, "boxes", list, where))],
    )


def _pair_from_dict(d: dict, where: str) -> PosterPair:
    review_d = _expect(d, "review", dict, where)
    status_s = _expect(review_d, "status", str, f"{where}.review")
    try:
        status = ReviewStatus(status_s)
    except ValueError as exc:
        raise SchemaError(f"{where}.review.status: unknown status {status_s!r}") from exc
    return PosterPair(
        pair_id=_expect(d, "pair_id", str, where),
        title=_expect(d, "title", str, where),
        source=_record_from_dict(_expect(d, "source", dict, where), f"{where}.source"),
        target=_record_from_dict(_expect(d, "target", dict, where), f"{where}.target"),
        review=Review(
            status=status,
            annotator=_expect(review_d, "annotator", str, f"{where}.review"),
            version=_expect(review_d, "version", int, f"{where}.review"),
        ),
    )


def manifest_from_dict(data: dict) -> BenchManifest:
    manifest = BenchManifest(
        version=_expect(data, "version", str, "manifest"),
        pivot_language=_expect(data, "pivot_language", str, "manifest"),
        languages=list(_expect(data, "languages", list, "manifest")),
        pairs=[_pair_from_dict(p, f"manifest.pairs[{i}]") for i, p in enumerate(_expect(data, "pairs", list, "manifest"))],
    )
    for lang in manifest.languages:
        if not isinstance(lang, str):
            raise SchemaError(f"manifest.languages: expected strings, got {lang!r}")
    manifest.validate()
    return manifest


def manifest_to_dict(manifest: BenchManifest) -> dict:
    def box_d(b: CharacterBox) -> dict:
        return {
            "char": b.char,
            "bbox": list(b.bbox),
            "word_index": b.word_index,
            "char_index": b.char_index,
        }

    def record_d(r: PosterRecord) -> dict:
        return {
            "language": r.language,
            "image_uri": r.image_uri,
            "width": r.width,
            "height": r.height,
            "boxes": [box_d(b) for b in r.boxes],
        }

    return {
        "version": manifest.version,
        "pivot_language": manifest.pivot_language,
        "languages": list(manifest.languages),
        "pairs": [
            {
                "pair_id": p.pair_id,
                "title": p.title,
                "source": record_d(p.source),
                "target": record_d(p.target),
                "review": {
                    "status": p.review.status.value,
                    "annotator": p.review.annotator,
                    "version": p.review.version,
                },
            }
            for p in manifest.pairs
        ],
    }


def load_manifest(path: str | Path) -> BenchManifest:
    """Load and validate a benchmark manifest. SchemaError for structural
    problems, InvariantError for semantic ones."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise
    except UnicodeDecodeError as exc:
        raise SchemaError(f"{path}: not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: manifest root must be a JSON object")
    try:
        return manifest_from_dict(data)
    except (SchemaError, InvariantError):
        raise


def save_manifest(manifest: BenchManifest, path: str | Path) -> Path:
    """Serialize with stable key order so identical manifests are
    byte-identical on disk."""
    manifest.validate()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(manifest_to_dict(manifest), ensure_ascii=False, indent=2, sort_keys=True)
    path.write_text(payload + "\n", encoding="utf-8")
    return path
