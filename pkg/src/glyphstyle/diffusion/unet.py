"""Compact conditional U-Net noise predictor over VAE latents.

Three resolutions, residual blocks, additive embeddings for character
identity, style-subject token, and prompt template. The output head is
zero-initialized so the untrained network predicts zero noise. A
full-scale backbone can be swapped in through the same forward contract
(latents, timesteps, conditioning indices) -> predicted noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import torch
from torch import nn

from ..errors import NonFiniteOutput, ShapeMismatch


@dataclass
class UnetConfig:
    latent_channels: int = 4
    latent_side: int = 16
    base_channels: int = 48
    channel_mults: tuple[int, ...] = (1, 2, 2)
    emb_dim: int = 128
    n_chars: int = 64
    n_subjects: int = 16
    n_templates: int = 8
    T: int = 1000


def _timestep_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    half = dim // 2
    freqs = torch.exp(-math.log(10000.0) * torch.arange(half, dtype=torch.float32) / half)
    args = t.float()[:, None] * freqs[None, :]
    return torch.cat([torch.cos(args), torch.sin(args)], dim=-1)


class _ResBlock(nn.Module):
    def __init__(self, c_in: int, c_out: int, emb_dim: int):
        super().__init__()
        groups = 8 if c_in % 8 == 0 else 1
        self.norm1 = nn.GroupNorm(groups, c_in)
        self.conv1 = nn.Conv2d(c_in, c_out, 3, padding=1)
        self.emb_proj = nn.Linear(emb_dim, c_out)
        self.norm2 = nn.GroupNorm(8 if c_out % 8 == 0 else 1, c_out)
        self.conv2 = nn.Conv2d(c_out, c_out, 3, padding=1)
        self.skip = nn.Conv2d(c_in, c_out, 1) if c_in != c_out else nn.Identity()

    def forward(self, x: torch.Tensor, emb: torch.Tensor) -> torch.Tensor:
        h = self.conv1(torch.nn.functional.silu(self.norm1(x)))
        h = h + self.emb_proj(emb)[:, :, None, None]
        h = self.conv2(torch.nn.functional.silu(self.norm2(h)))
        return h + self.skip(x)


class CondUnet(nn.Module):
    def __init__(self, config: UnetConfig):
        super().__init__()
        self.config = config
        c = config.base_channels
        e = config.emb_dim
        self.time_mlp = nn.Sequential(nn.Linear(e, e), nn.SiLU(), nn.Linear(e, e))
        self.char_emb = nn.Embedding(config.n_chars, e)
        self.subject_emb = nn.Embedding(config.n_subjects, e)
        self.template_emb = nn.Embedding(config.n_templates, e)

        chans = [c * m for m in config.channel_mults]
        self.stem = nn.Conv2d(config.latent_channels, chans[0], 3, padding=1)
        self.down_blocks = nn.ModuleList()
        self.downsamples = nn.ModuleList()
        for i in range(len(chans)):
            c_in = chans[max(i - 1, 0)]
            self.down_blocks.append(_ResBlock(c_in if i > 0 else chans[0], chans[i], e))
            self.downsamples.append(
                nn.Conv2d(chans[i], chans[i], 4, stride=2, padding=1)
                if i < len(chans) - 1
                else nn.Identity()
            )
        self.mid = _ResBlock(chans[-1], chans[-1], e)
        self.up_blocks = nn.ModuleList()
        self.upsamples = nn.ModuleList()
        for i in reversed(range(len(chans))):
            self.up_blocks.append(_ResBlock(chans[i] * 2, chans[max(i - 1, 0)], e))
            self.upsamples.append(
                nn.Upsample(scale_factor=2, mode="nearest")
                if i > 0
                else nn.Identity()
            )
        self.head_norm = nn.GroupNorm(8 if chans[0] % 8 == 0 else 1, chans[0])
        self.head = nn.Conv2d(chans[0], config.latent_channels, 3, padding=1)
        nn.init.zeros_(self.head.weight)
        nn.init.zeros_(self.head.bias)

    def forward(
        self, z_t: torch.Tensor, t: torch.Tensor, cond: torch.Tensor
    ) -> torch.Tensor:
        """cond is [B, 3] long: (char_idx, subject_idx, template_idx)."""
        if z_t.dim() != 4 or z_t.shape[1] != self.config.latent_channels:
            raise ShapeMismatch(f"expected [B,{self.config.latent_channels},h,w], got {tuple(z_t.shape)}")
        if cond.dim() != 2 or cond.shape[1] != 3:
            raise ShapeMismatch(f"conditioning must be [B,3] indices, got {tuple(cond.shape)}")
        emb = self.time_mlp(_timestep_embedding(t, self.config.emb_dim))
        emb = emb + self.char_emb(cond[:, 0]) + self.subject_emb(cond[:, 1]) + self.template_emb(cond[:, 2])

        h = self.stem(z_t)
        skips = []
        for block, down in zip(self.down_blocks, self.downsamples):
            h = block(h, emb)
            skips.append(h)
            h = down(h)
        h = self.mid(h, emb)
        for block, up in zip(self.up_blocks, self.upsamples):
            h = block(torch.cat([h, skips.pop()], dim=1), emb)
            h = up(h)
        return self.head(torch.nn.functional.silu(self.head_norm(h)))

    def conditioning_vector(self, cond: torch.Tensor) -> torch.Tensor:
        """The additive conditioning embedding, before the time term."""
        return (
            self.char_emb(cond[:, 0])
            + self.subject_emb(cond[:, 1])
            + self.template_emb(cond[:, 2])
        )

    def config_dict(self) -> dict:
        d = asdict(self.config)
        d["channel_mults"] = list(self.config.channel_mults)
        return d


def predict_noise(
    model: CondUnet, z_t: torch.Tensor, t: torch.Tensor, cond: torch.Tensor
) -> torch.Tensor:
    """Noise prediction with a finite-output guard."""
    eps_hat = model(z_t, t, cond)
    if not torch.isfinite(eps_hat).all():
        raise NonFiniteOutput("noise prediction contains NaN or inf")
    return eps_hat
