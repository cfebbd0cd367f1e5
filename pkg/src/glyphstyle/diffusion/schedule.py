"""Forward-process noise schedule (linear betas, DDPM parameterization)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import torch

from ..errors import InvariantError


@dataclass
class NoiseSchedule:
    """Linear beta schedule with cumulative alpha products.

    alphas_bar[t] = prod_{s<=t} (1 - betas[s]), strictly decreasing.
    """

    T: int = 1000
    beta_start: float = 1e-4
    beta_end: float = 2e-2
    betas: np.ndarray = field(init=False)
    alphas_bar: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.T < 1:
            raise InvariantError(f"T must be >= 1, got {self.T}")
        self.betas = np.linspace(self.beta_start, self.beta_end, self.T, dtype=np.float64)
        if (self.betas <= 0).any() or (self.betas >= 1).any():
            raise InvariantError("betas must lie in (0, 1)")
        self.alphas_bar = np.cumprod(1.0 - self.betas)
        if not (np.diff(self.alphas_bar) < 0).all():
            raise InvariantError("alphas_bar must be strictly decreasing")
        if self.alphas_bar[0] >= 1.0 or self.alphas_bar[-1] <= 0.0:
            raise InvariantError("alphas_bar endpoints must lie in (0, 1)")

    def alpha_bar(self, t: int) -> float:
        if not 0 <= t < self.T:
            raise IndexError(f"timestep {t} outside [0, {self.T})")
        return float(self.alphas_bar[t])

    def alpha_bar_prev(self, t_prev: int) -> float:
        """Cumulative alpha for the *destination* of a reverse step.

        t_prev == -1 denotes the fully denoised endpoint; alphas_bar[0] is
        used there so stochastic transitions keep a proper density.
        """
        if t_prev < 0:
            return float(self.alphas_bar[0])
        return self.alpha_bar(t_prev)


def add_noise(
    z0: torch.Tensor, t: int, eps: torch.Tensor, schedule: NoiseSchedule
) -> torch.Tensor:
    """z_t = sqrt(abar_t) * z0 + sqrt(1 - abar_t) * eps."""
    if eps.shape != z0.shape:
        raise InvariantError(f"eps shape {tuple(eps.shape)} != z0 shape {tuple(z0.shape)}")
    abar = schedule.alpha_bar(t)
    return np.sqrt(abar) * z0 + np.sqrt(1.0 - abar) * eps


def add_noise_batch(
    z0: torch.Tensor, t: torch.Tensor, eps: torch.Tensor, schedule: NoiseSchedule
) -> torch.Tensor:
    """Vectorized add_noise for a batch of per-sample timesteps."""
    if eps.shape != z0.shape:
        raise InvariantError(f"eps shape {tuple(eps.shape)} != z0 shape {tuple(z0.shape)}")
    abar = torch.from_numpy(schedule.alphas_bar).to(z0.dtype)[t]
    while abar.dim() < z0.dim():
        abar = abar.unsqueeze(-1)
    return torch.sqrt(abar) * z0 + torch.sqrt(1.0 - abar) * eps
