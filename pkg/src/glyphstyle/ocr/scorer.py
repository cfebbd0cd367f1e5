"""Scorer abstraction shared by the reward model and the evaluation model.

Scorers carry a role tag; the evaluation path hard-rejects the reward
scorer so training rewards and reported accuracy never come from the
same model.
"""

from __future__ import annotations

import abc

import numpy as np
from PIL import Image

from ..errors import SameModelAsReward

EVAL_INPUT_PX = 25


class OcrScorer(abc.ABC):
    """Character scorer over a fixed vocabulary C."""

    role: str  # "reward" or "eval"
    checkpoint_id: str

    @property
    @abc.abstractmethod
    def vocabulary(self) -> list[str]:
        ...

    @abc.abstractmethod
    def distribution(self, image: np.ndarray) -> np.ndarray:
        """Probabilities over the vocabulary; sums to 1."""

    def score(self, image: np.ndarray, char: str) -> float:
        vocab = self.vocabulary
        if char not in vocab:
            from ..errors import CharNotInVocabulary

            raise CharNotInVocabulary(f"{char!r} not in scorer vocabulary {vocab}")
        return float(self.distribution(image)[vocab.index(char)])

    def transcribe(self, image: np.ndarray) -> str:
        return self.vocabulary[int(np.argmax(self.distribution(image)))]

    @abc.abstractmethod
    def detect_count(self, image: np.ndarray) -> int:
        """Number of character-scale ink components; >= 1 always."""


def to_grayscale(image: np.ndarray) -> np.ndarray:
    arr = np.asarray(image, dtype=np.float32)
    if arr.ndim == 3:
        arr = arr @ np.array([0.299, 0.587, 0.114], dtype=np.float32)
    return np.clip(arr, 0.0, 1.0)


def resize_for_eval(image: np.ndarray, px: int = EVAL_INPUT_PX) -> np.ndarray:
    """Deterministic bilinear resize to the evaluation input size."""
    gray = to_grayscale(image)
    if gray.shape == (px, px):
        return gray
    img = Image.fromarray((gray * 255.0).round().astype(np.uint8))
    out = img.resize((px, px), Image.BILINEAR)
    return np.asarray(out, dtype=np.float32) / 255.0


def transcribe_for_eval(image: np.ndarray, scorer: OcrScorer) -> str:
    """Evaluation transcription: resize to 25x25, then transcribe.

    Refuses to run with the reward-role scorer.
    """
    if getattr(scorer, "role", None) != "eval":
        raise SameModelAsReward(
            f"evaluation requires an eval-role scorer, got role={getattr(scorer, 'role', None)!r}"
        )
    return scorer.transcribe(resize_for_eval(image))
