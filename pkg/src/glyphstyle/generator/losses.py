"""Training objective: denoising MSE plus schedule-weighted glyph guidance.

The guidance coefficient f(t) = lambda * (1 - exp(-t / tau)) ramps the
glyph term in as t grows; t is the diffusion timestep by default, with a
config switch to drive it from the training step instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Union

import numpy as np
import torch

from ..errors import ShapeMismatch

ArrayLike = Union[np.ndarray, torch.Tensor]


@dataclass
class GuidanceSchedule:
    lam: float = 0.1
    tau: float = 50.0
    t_source: str = "diffusion_timestep"  # or "training_step"

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        if self.tau <= 0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if self.t_source not in ("diffusion_timestep", "training_step"):
            raise ValueError(f"unknown t_source {self.t_source!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def coefficient_f(t: float, schedule: GuidanceSchedule) -> float:
    """lambda * (1 - exp(-t / tau)); monotone in t, bounded by lambda."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return schedule.lam * (1.0 - math.exp(-t / schedule.tau))


def _check_shapes(a: ArrayLike, b: ArrayLike) -> None:
    if tuple(a.shape) != tuple(b.shape):
        raise ShapeMismatch(f"shape {tuple(a.shape)} != {tuple(b.shape)}")


def _mse(a: ArrayLike, b: ArrayLike):
    _check_shapes(a, b)
    if isinstance(a, torch.Tensor) or isinstance(b, torch.Tensor):
        a = a if isinstance(a, torch.Tensor) else torch.as_tensor(a)
        b = b if isinstance(b, torch.Tensor) else torch.as_tensor(b)
        return torch.mean((a - b) ** 2)
    return float(np.mean((np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)) ** 2))


def diffusion_loss(eps_hat: ArrayLike, eps: ArrayLike):
    """Mean squared error between predicted and true noise."""
    return _mse(eps_hat, eps)


def glyph_loss(eps_hat: ArrayLike, glyph_latent: ArrayLike):
    """Mean squared error between the prediction and the glyph latent."""
    return _mse(eps_hat, glyph_latent)


def combined_loss(
    eps_hat: ArrayLike,
    eps: ArrayLike,
    glyph_latent: ArrayLike,
    t: float,
    schedule: GuidanceSchedule,
):
    """diffusion_loss + f(t) * glyph_loss, exactly."""
    return diffusion_loss(eps_hat, eps) + coefficient_f(t, schedule) * glyph_loss(
        eps_hat, glyph_latent
    )
