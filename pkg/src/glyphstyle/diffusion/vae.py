"""Compact convolutional VAE defining the latent space (4 channels, 4x down)."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np
import torch
from torch import nn

from ..errors import CorpusTooSmall, NonFiniteLoss, ShapeMismatch
from .checkpoint import load_checkpoint, save_checkpoint


@dataclass
class VaeConfig:
    resolution: int = 64
    latent_channels: int = 4
    base_channels: int = 48
    kl_weight: float = 1e-6
    learning_rate: float = 2e-3
    batch_size: int = 32
    epochs: int = 60
    min_corpus: int = 500
    seed: int = 0
    holdout_fraction: float = 0.05


class ConvVae(nn.Module):
    """Encoder: image [B,3,H,W] -> latent [B,4,H/4,W/4]; decoder inverts.

    Decoder output is sigmoid-squashed, so decodes always land in [0,1].
    """

    def __init__(self, config: VaeConfig):
        super().__init__()
        self.config = config
        c = config.base_channels
        lc = config.latent_channels
        self.encoder = nn.Sequential(
            nn.Conv2d(3, c, 3, padding=1),
            nn.SiLU(),
            nn.Conv2d(c, c * 2, 4, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(c * 2, c * 2, 4, stride=2, padding=1),
            nn.SiLU(),
            nn.Conv2d(c * 2, c * 2, 3, padding=1),
            nn.SiLU(),
        )
        self.to_moments = nn.Conv2d(c * 2, lc * 2, 1)
        self.from_latent = nn.Conv2d(lc, c * 2, 3, padding=1)
        self.decoder = nn.Sequential(
            nn.SiLU(),
            nn.Upsample(scale_factor=2, mode="nearest"),
            nn.Conv2d(c * 2, c * 2, 3, padding=1),
            nn.SiLU(),
            nn.Upsample(scale_factor=2, mode="nearest"),
            nn.Conv2d(c * 2, c, 3, padding=1),
            nn.SiLU(),
            nn.Conv2d(c, 3, 3, padding=1),
        )
        # Calibrated after training so diffusion sees ~unit-variance latents.
        self.register_buffer("latent_scale", torch.tensor(1.0))

    def moments(self, images: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        if images.dim() != 4 or images.shape[1] != 3:
            raise ShapeMismatch(f"expected [B,3,H,W], got {tuple(images.shape)}")
        r = self.config.resolution
        if images.shape[2] != r or images.shape[3] != r:
            raise ShapeMismatch(
                f"expected {r}x{r} input, got {images.shape[2]}x{images.shape[3]}"
            )
        mu, logvar = self.to_moments(self.encoder(images)).chunk(2, dim=1)
        return mu, logvar.clamp(-12.0, 8.0)

    def encode(
        self,
        images: torch.Tensor,
        sample: bool = False,
        generator: torch.Generator | None = None,
    ) -> torch.Tensor:
        """Mean latent by default; set sample=True for the stochastic branch."""
        mu, logvar = self.moments(images)
        if sample:
            eps = torch.randn(mu.shape, generator=generator, dtype=mu.dtype)
            mu = mu + torch.exp(0.5 * logvar) * eps
        return mu * self.latent_scale

    def decode(self, latents: torch.Tensor) -> torch.Tensor:
        if latents.dim() != 4 or latents.shape[1] != self.config.latent_channels:
            raise ShapeMismatch(
                f"expected [B,{self.config.latent_channels},h,w], got {tuple(latents.shape)}"
            )
        out = torch.sigmoid(self.decoder(self.from_latent(latents / self.latent_scale)))
        return out.clamp(0.0, 1.0)

    @property
    def latent_shape(self) -> tuple[int, int, int]:
        r = self.config.resolution // 4
        return (self.config.latent_channels, r, r)


def _to_batch_tensor(images: list[np.ndarray] | np.ndarray) -> torch.Tensor:
    arr = np.stack(images) if isinstance(images, list) else images
    if arr.ndim != 4 or arr.shape[-1] != 3:
        raise ShapeMismatch(f"expected [N,H,W,3] corpus, got {arr.shape}")
    return torch.from_numpy(np.ascontiguousarray(arr.transpose(0, 3, 1, 2))).float()


def vae_encode(vae: ConvVae, image: np.ndarray) -> np.ndarray:
    """Single HxWx3 float image in [0,1] -> latent [4, H/4, W/4]."""
    if image.ndim != 3 or image.shape[-1] != 3:
        raise ShapeMismatch(f"expected HxWx3 image, got {image.shape}")
    with torch.no_grad():
        z = vae.encode(_to_batch_tensor(image[None]))
    return z[0].numpy()


def vae_decode(vae: ConvVae, latent: np.ndarray) -> np.ndarray:
    """Latent [4, h, w] -> HxWx3 float image in [0,1]."""
    if latent.ndim != 3:
        raise ShapeMismatch(f"expected [c,h,w] latent, got {latent.shape}")
    with torch.no_grad():
        img = vae.decode(torch.from_numpy(latent[None]).float())
    return img[0].permute(1, 2, 0).numpy()


def train_vae(
    image_corpus: list[np.ndarray] | np.ndarray,
    config: VaeConfig,
    out_path: str | Path,
) -> Path:
    """Train the VAE on an image corpus and write a checkpoint.

    Corpus entries are HxWx3 float arrays in [0,1] at config.resolution.
    """
    data = _to_batch_tensor(image_corpus)
    if len(data) < config.min_corpus:
        raise CorpusTooSmall(f"corpus has {len(data)} images, need >= {config.min_corpus}")

    torch.manual_seed(config.seed)
    vae = ConvVae(config)
    opt = torch.optim.Adam(vae.parameters(), lr=config.learning_rate)

    n_hold = max(8, int(len(data) * config.holdout_fraction))
    perm = torch.randperm(len(data), generator=torch.Generator().manual_seed(config.seed))
    data = data[perm]
    holdout, train = data[:n_hold], data[n_hold:]

    losses = []
    gen = torch.Generator().manual_seed(config.seed + 1)
    for epoch in range(config.epochs):
        order = torch.randperm(len(train), generator=gen)
        for i in range(0, len(train), config.batch_size):
            batch = train[order[i : i + config.batch_size]]
            mu, logvar = vae.moments(batch)
            eps = torch.randn(mu.shape, generator=gen)
            z = mu + torch.exp(0.5 * logvar) * eps
            recon = torch.sigmoid(vae.decoder(vae.from_latent(z)))
            recon_loss = torch.mean((recon - batch) ** 2)
            kl = -0.5 * torch.mean(
                torch.sum(1 + logvar - mu**2 - torch.exp(logvar), dim=(1, 2, 3))
            )
            loss = recon_loss + config.kl_weight * kl
            if not torch.isfinite(loss):
                raise NonFiniteLoss(
                    f"VAE loss non-finite at epoch {epoch} (recon={recon_loss}, kl={kl})"
                )
            opt.zero_grad()
            loss.backward()
            opt.step()
            losses.append(float(loss))

    vae.eval()
    with torch.no_grad():
        mu, _ = vae.moments(train[: min(len(train), 512)])
        std = float(mu.std())
        vae.latent_scale.fill_(1.0 / max(std, 1e-6))
        recon = vae.decode(vae.encode(holdout))
        mse = torch.mean((recon - holdout) ** 2, dim=(1, 2, 3))
        psnr = float((-10.0 * torch.log10(mse.clamp_min(1e-12))).mean())

    meta = {
        "config": asdict(config),
        "resolution": config.resolution,
        "latent_channels": config.latent_channels,
        "seed": config.seed,
        "holdout_psnr_db": psnr,
        "final_loss": losses[-1],
    }
    return save_checkpoint(out_path, "vae", {"model": vae.state_dict()}, meta)


def load_vae(path: str | Path) -> ConvVae:
    meta, state = load_checkpoint(path, kind="vae")
    vae = ConvVae(VaeConfig(**meta["config"]))
    vae.load_state_dict(state["model"])
    vae.eval()
    return vae
