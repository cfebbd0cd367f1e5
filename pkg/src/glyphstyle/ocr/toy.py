"""Trainable toy character scorer: a small CNN over rendered glyphs.

Two independently trained instances (disjoint seeds and font splits)
play the reward and evaluation roles. Augmentation covers shift, scale,
polarity/contrast changes, and additive noise; uniform-labeled noise
images calibrate the scorer toward chance on unrecognizable input.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict, field
from pathlib import Path

import numpy as np
import torch
from scipy import ndimage
from skimage.filters import threshold_otsu
from torch import nn

from ..diffusion.checkpoint import load_checkpoint, save_checkpoint
from ..errors import InsufficientFonts, NonFiniteLoss
from ..glyphcore.render import FontRegistry, default_font_registry, render_glyph
from ..glyphcore.types import Script
from .scorer import OcrScorer, to_grayscale, resize_for_eval

_BLANK_RANGE = 0.04


@dataclass
class ToyOcrConfig:
    vocab: str = "ABCDEFGHKL"
    scripts: list[str] = field(default_factory=lambda: ["latin"])
    role: str = "reward"
    canvas_px: int = 64
    input_px: int = 25
    n_augments: int = 48
    noise_rows_fraction: float = 0.12
    epochs: int = 10
    learning_rate: float = 2e-3
    batch_size: int = 64
    seed: int = 0

    def validate(self) -> None:
        if self.role not in ("reward", "eval"):
            raise ValueError(f"role must be reward|eval, got {self.role!r}")
        if not self.vocab:
            raise ValueError("vocabulary must be non-empty")


class _OcrNet(nn.Module):
    def __init__(self, n_classes: int, input_px: int):
        super().__init__()
        self.conv1 = nn.Conv2d(1, 16, 3, padding=1)
        self.conv2 = nn.Conv2d(16, 32, 3, padding=1)
        self.pool = nn.MaxPool2d(2)
        side = input_px // 4
        self.fc1 = nn.Linear(32 * side * side, 64)
        self.fc2 = nn.Linear(64, n_classes)

    def features(self, x: torch.Tensor) -> torch.Tensor:
        h = self.pool(torch.relu(self.conv1(x)))
        h = self.pool(torch.relu(self.conv2(h)))
        return torch.relu(self.fc1(h.flatten(1)))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc2(self.features(x))


def _augment(img: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    out = img.copy()
    h, w = out.shape
    # scale
    s = rng.uniform(0.75, 1.15)
    if abs(s - 1.0) > 0.01:
        zoomed = ndimage.zoom(out, s, order=1, mode="constant", cval=1.0)
        zh, zw = zoomed.shape
        canvas = np.ones_like(out)
        if zh >= h:
            y0 = (zh - h) // 2
            canvas = zoomed[y0 : y0 + h, (zw - w) // 2 : (zw - w) // 2 + w]
        else:
            y0 = (h - zh) // 2
            x0 = (w - zw) // 2
            canvas[y0 : y0 + zh, x0 : x0 + zw] = zoomed
        out = canvas
    # shift
    dy, dx = rng.integers(-int(h * 0.12), int(h * 0.12) + 1, size=2)
    out = ndimage.shift(out, (dy, dx), order=0, mode="constant", cval=1.0)
    # polarity + contrast + brightness
    if rng.random() < 0.5:
        out = 1.0 - out
    gain = rng.uniform(0.7, 1.3)
    bias = rng.uniform(-0.15, 0.15)
    out = out * gain + bias
    # noise
    out = out + rng.normal(0.0, rng.uniform(0.0, 0.12), size=out.shape)
    return np.clip(out, 0.0, 1.0).astype(np.float32)


def _render_clean(
    vocab: str, font_ids: list[str], canvas_px: int, registry: FontRegistry
) -> list[tuple[np.ndarray, int]]:
    rows = []
    for ci, char in enumerate(vocab):
        for fid in font_ids:
            spec = render_glyph(char, Script.LATIN, fid, canvas_px, registry)
            rows.append((spec.image, ci))
    return rows


def train_toy_ocr(
    scripts: list[str],
    fonts: dict[str, list[str]],
    config: ToyOcrConfig,
    out_path: str | Path,
    registry: FontRegistry | None = None,
) -> Path:
    """Train a classifier over config.vocab on rendered, augmented glyphs.

    `fonts` maps script name to the font ids used for that script; every
    requested script needs at least two fonts.
    """
    config.validate()
    registry = registry if registry is not None else default_font_registry()
    font_ids: list[str] = []
    for script in scripts:
        ids = fonts.get(script, [])
        if len(ids) < 2:
            raise InsufficientFonts(
                f"script {script!r} has {len(ids)} fonts, need >= 2 for augmentation"
            )
        font_ids.extend(ids)

    rng = np.random.default_rng(config.seed)
    clean = _render_clean(config.vocab, font_ids, config.canvas_px, registry)

    n_classes = len(config.vocab)
    images, targets = [], []
    for img, ci in clean:
        onehot = np.zeros(n_classes, dtype=np.float32)
        onehot[ci] = 1.0
        for _ in range(config.n_augments):
            images.append(resize_for_eval(_augment(img, rng), config.input_px))
            targets.append(onehot)
    n_noise = int(len(images) * config.noise_rows_fraction)
    uniform = np.full(n_classes, 1.0 / n_classes, dtype=np.float32)
    for _ in range(n_noise):
        if rng.random() < 0.5:
            noise = rng.random((config.input_px, config.input_px)).astype(np.float32)
        else:
            base = rng.uniform(0.2, 0.8)
            noise = np.clip(
                base + rng.normal(0, 0.25, (config.input_px, config.input_px)), 0, 1
            ).astype(np.float32)
        images.append(noise)
        targets.append(uniform)

    x = torch.from_numpy(np.stack(images))[:, None, :, :]
    y = torch.from_numpy(np.stack(targets))

    torch.manual_seed(config.seed)
    net = _OcrNet(n_classes, config.input_px)
    opt = torch.optim.Adam(net.parameters(), lr=config.learning_rate)
    gen = torch.Generator().manual_seed(config.seed)
    for _epoch in range(config.epochs):
        order = torch.randperm(len(x), generator=gen)
        for i in range(0, len(x), config.batch_size):
            idx = order[i : i + config.batch_size]
            logits = net(x[idx])
            loss = -(y[idx] * torch.log_softmax(logits, dim=1)).sum(dim=1).mean()
            if not torch.isfinite(loss):
                raise NonFiniteLoss("toy OCR loss became non-finite")
            opt.zero_grad()
            loss.backward()
            opt.step()

    net.eval()
    with torch.no_grad():
        held = torch.from_numpy(
            np.stack([resize_for_eval(img, config.input_px) for img, _ in clean])
        )[:, None]
        pred = net(held).argmax(dim=1).numpy()
        truth = np.array([ci for _, ci in clean])
        accuracy = float((pred == truth).mean())

    meta = {
        "config": asdict(config),
        "role": config.role,
        "vocab": list(config.vocab),
        "fonts": {s: list(fonts[s]) for s in scripts},
        "clean_accuracy": accuracy,
        "seed": config.seed,
    }
    return save_checkpoint(out_path, "ocr", {"net": net.state_dict()}, meta)


class ToyOcrScorer(OcrScorer):
    def __init__(self, net: _OcrNet, vocab: list[str], role: str, input_px: int, checkpoint_id: str):
        self.net = net
        self.net.eval()
        self._vocab = vocab
        self.role = role
        self.input_px = input_px
        self.checkpoint_id = checkpoint_id

    @property
    def vocabulary(self) -> list[str]:
        return self._vocab

    def _is_blank(self, gray: np.ndarray) -> bool:
        return float(gray.max() - gray.min()) < _BLANK_RANGE

    def distribution(self, image: np.ndarray) -> np.ndarray:
        gray = to_grayscale(image)
        if self._is_blank(gray):
            return np.full(len(self._vocab), 1.0 / len(self._vocab))
        x = torch.from_numpy(resize_for_eval(gray, self.input_px))[None, None]
        with torch.no_grad():
            probs = torch.softmax(self.net(x), dim=1)[0].numpy()
        return probs.astype(np.float64) / probs.sum()

    def distribution_batch(self, images: np.ndarray) -> np.ndarray:
        """Vectorized distribution over a stack of images (no blank check)."""
        x = torch.from_numpy(
            np.stack([resize_for_eval(to_grayscale(im), self.input_px) for im in images])
        )[:, None]
        with torch.no_grad():
            probs = torch.softmax(self.net(x), dim=1).numpy()
        return probs

    def detect_count(self, image: np.ndarray) -> int:
        gray = to_grayscale(image)
        if self._is_blank(gray):
            return 1
        th = float(threshold_otsu(gray))
        dark = gray < th
        fg = dark if dark.mean() <= 0.5 else ~dark
        labels, n = ndimage.label(fg, structure=np.ones((3, 3)))
        if n == 0:
            return 1
        areas = ndimage.sum_labels(np.ones_like(gray), labels, index=np.arange(1, n + 1))
        min_area = max(9.0, 0.002 * gray.size)
        return max(1, int((areas >= min_area).sum()))

    def embed(self, image: np.ndarray) -> np.ndarray:
        """Penultimate-layer features, for embedding-similarity metrics."""
        gray = resize_for_eval(to_grayscale(image), self.input_px)
        x = torch.from_numpy(gray)[None, None]
        with torch.no_grad():
            feats = self.net.features(x)[0].numpy()
        return feats.astype(np.float64)


def load_toy_ocr(path: str | Path) -> ToyOcrScorer:
    from ..diffusion.checkpoint import file_sha256

    meta, state = load_checkpoint(path, kind="ocr")
    cfg = meta["config"]
    net = _OcrNet(len(meta["vocab"]), cfg["input_px"])
    net.load_state_dict(state["net"])
    return ToyOcrScorer(
        net=net,
        vocab=list(meta["vocab"]),
        role=meta["role"],
        input_px=cfg["input_px"],
        checkpoint_id=file_sha256(path),
    )
