"""Checkpoint files: torch parameter archive plus a JSON metadata header."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import torch

from ..errors import MissingCheckpoint

SCHEMA_VERSION = "glyphstyle-ckpt/1"


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def save_checkpoint(
    path: str | Path,
    kind: str,
    state: dict[str, Any],
    meta: dict[str, Any],
    parent: str | Path | None = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "parent_checkpoint_hash": file_sha256(parent) if parent else None,
        **meta,
    }
    torch.save({"meta": json.dumps(header, sort_keys=True), "state": state}, path)
    return path


def load_checkpoint(path: str | Path, kind: str | None = None) -> tuple[dict, dict]:
    """Returns (meta, state). Raises MissingCheckpoint if absent or of the
    wrong kind."""
    path = Path(path)
    if not path.exists():
        raise MissingCheckpoint(f"checkpoint not found: {path}")
    payload = torch.load(path, map_location="cpu", weights_only=False)
    meta = json.loads(payload["meta"])
    if kind is not None and meta.get("kind") != kind:
        raise MissingCheckpoint(
            f"{path} is a {meta.get('kind')!r} checkpoint, expected {kind!r}"
        )
    return meta, payload["state"]


def checkpoint_metadata(path: str | Path) -> dict:
    meta, _ = load_checkpoint(path)
    return meta
