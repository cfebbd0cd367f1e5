"""OCR-derived rewards: target-character probability with a count penalty."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import torch

from ..diffusion.vae import ConvVae, vae_decode
from ..errors import InvalidCount, InvariantError
from ..ocr.scorer import OcrScorer


@dataclass(frozen=True)
class RewardRecord:
    r_base: float
    n_detected: int
    penalty: float
    reward: float

    def validate(self) -> None:
        if not 0.0 <= self.r_base <= 1.0:
            raise InvariantError(f"r_base must be in [0,1], got {self.r_base}")
        if self.n_detected < 1:
            raise InvariantError(f"n_detected must be >= 1, got {self.n_detected}")
        if abs(self.penalty - count_penalty(self.n_detected)) > 1e-12:
            raise InvariantError("penalty must equal exp(-(n_detected - 1))")
        if abs(self.reward - self.r_base * self.penalty) > 1e-12:
            raise InvariantError("reward must equal r_base * penalty")


def count_penalty(n: int) -> float:
    """exp(-(n - 1)): 1 at a single detection, decaying with duplicates."""
    if n < 1:
        raise InvalidCount(f"detected-character count must be >= 1, got {n}")
    return math.exp(-(n - 1))


def _decode(final_latent, vae: ConvVae) -> np.ndarray:
    if isinstance(final_latent, torch.Tensor):
        final_latent = final_latent.detach().cpu().numpy()
    return vae_decode(vae, np.asarray(final_latent, dtype=np.float32))


def base_reward(final_latent, char: str, scorer: OcrScorer, vae: ConvVae) -> float:
    """Probability the scorer assigns to `char` on the decoded latent."""
    image = _decode(final_latent, vae)
    return scorer.score(image, char)


def final_reward(final_latent, char: str, scorer: OcrScorer, vae: ConvVae) -> RewardRecord:
    """Base reward scaled by the duplicate-detection penalty."""
    image = _decode(final_latent, vae)
    r_base = scorer.score(image, char)
    n = scorer.detect_count(image)
    penalty = count_penalty(n)
    record = RewardRecord(r_base=r_base, n_detected=n, penalty=penalty, reward=r_base * penalty)
    record.validate()
    return record
