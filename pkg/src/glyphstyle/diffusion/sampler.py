"""Stochastic DDIM sampling with per-transition Gaussian log-densities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import torch

from ..errors import DegenerateDensity, InvariantError
from .schedule import NoiseSchedule
from .unet import CondUnet, predict_noise

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass
class SamplerConfig:
    ddim_steps: int = 50
    eta: float = 1.0
    guidance_free: bool = True  # no classifier-free guidance at desk scale

    def validate(self, T: int) -> None:
        if not 1 <= self.ddim_steps <= T:
            raise InvariantError(f"ddim_steps must be in [1, {T}], got {self.ddim_steps}")
        if self.eta < 0:
            raise InvariantError(f"eta must be >= 0, got {self.eta}")


@dataclass
class DdimStep:
    """One reverse transition z_t -> z_prev and its sampling density."""

    t: int
    t_prev: int
    z_t: torch.Tensor
    z_prev: torch.Tensor
    log_p: torch.Tensor  # [batch], summed over latent elements


@dataclass
class Trajectory:
    steps: list[DdimStep] = field(default_factory=list)
    final_latent: torch.Tensor | None = None


def ddim_timesteps(T: int, ddim_steps: int) -> list[int]:
    """Descending timestep grid; the last transition targets t_prev = -1."""
    grid = np.linspace(0, T - 1, ddim_steps).round().astype(int)
    return list(dict.fromkeys(grid.tolist()))[::-1]


def gaussian_log_prob(x: torch.Tensor, mean: torch.Tensor, std: float) -> torch.Tensor:
    """Diagonal Gaussian log-density, summed over all non-batch dims."""
    if std <= 0:
        raise DegenerateDensity("log-probability undefined for std <= 0")
    elem = -_LOG_SQRT_2PI - math.log(std) - (x - mean) ** 2 / (2.0 * std * std)
    return elem.sum(dim=tuple(range(1, x.dim())))


def ddim_moments(
    z_t: torch.Tensor,
    t: int,
    t_prev: int,
    eps_hat: torch.Tensor,
    eta: float,
    schedule: NoiseSchedule,
) -> tuple[torch.Tensor, float]:
    """(mean, std) of the stochastic DDIM transition density."""
    abar_t = schedule.alpha_bar(t)
    abar_prev = schedule.alpha_bar_prev(t_prev)
    sigma = eta * math.sqrt(
        max((1.0 - abar_prev) / (1.0 - abar_t) * (1.0 - abar_t / abar_prev), 0.0)
    )
    x0_pred = (z_t - math.sqrt(1.0 - abar_t) * eps_hat) / math.sqrt(abar_t)
    direction = math.sqrt(max(1.0 - abar_prev - sigma**2, 0.0)) * eps_hat
    mean = math.sqrt(abar_prev) * x0_pred + direction
    return mean, sigma


def ddim_step_with_logprob(
    z_t: torch.Tensor,
    t: int,
    t_prev: int,
    eps_hat: torch.Tensor,
    eta: float,
    schedule: NoiseSchedule,
    rng: torch.Generator | None = None,
    want_log_prob: bool = True,
    z_prev: torch.Tensor | None = None,
) -> tuple[torch.Tensor, torch.Tensor | None]:
    """One reverse step. Samples z_prev unless it is given (re-scoring path).

    Returns (z_prev, log_p) with log_p summed over latent elements per batch
    item, or None when not requested. eta == 0 is allowed only when no
    log-probability is requested.
    """
    mean, sigma = ddim_moments(z_t, t, t_prev, eps_hat, eta, schedule)
    if want_log_prob and sigma <= 0.0:
        raise DegenerateDensity(
            f"log-probability requested but sigma(eta={eta}, t={t})={sigma}"
        )
    if z_prev is None:
        if sigma > 0.0:
            noise = torch.randn(mean.shape, generator=rng, dtype=mean.dtype)
            z_prev = mean + sigma * noise
        else:
            z_prev = mean
    log_p = gaussian_log_prob(z_prev, mean, sigma) if want_log_prob else None
    return z_prev, log_p


def sample(
    model: CondUnet,
    cond: torch.Tensor,
    sampler_config: SamplerConfig,
    schedule: NoiseSchedule,
    rng: torch.Generator,
    record_trajectory: bool = True,
) -> tuple[torch.Tensor, Trajectory]:
    """Generate latents for a batch of conditioning rows.

    The trajectory stores one DdimStep per transition; with eta == 0 the
    log_p fields are omitted and sampling is deterministic.
    """
    sampler_config.validate(schedule.T)
    want_logp = sampler_config.eta > 0.0
    batch = cond.shape[0]
    shape = (batch, model.config.latent_channels, *_latent_hw(model))
    z = torch.randn(shape, generator=rng)

    traj = Trajectory()
    timesteps = ddim_timesteps(schedule.T, sampler_config.ddim_steps)
    with torch.no_grad():
        for i, t in enumerate(timesteps):
            t_prev = timesteps[i + 1] if i + 1 < len(timesteps) else -1
            t_batch = torch.full((batch,), t, dtype=torch.long)
            eps_hat = predict_noise(model, z, t_batch, cond)
            z_next, log_p = ddim_step_with_logprob(
                z, t, t_prev, eps_hat, sampler_config.eta, schedule, rng, want_logp
            )
            if record_trajectory:
                traj.steps.append(
                    DdimStep(
                        t=t,
                        t_prev=t_prev,
                        z_t=z.clone(),
                        z_prev=z_next.clone(),
                        log_p=log_p.clone() if log_p is not None else torch.zeros(batch),
                    )
                )
            z = z_next
    traj.final_latent = z
    return z, traj


def _latent_hw(model: CondUnet) -> tuple[int, int]:
    side = model.config.latent_side
    return (side, side)
