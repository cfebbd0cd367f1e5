"""Style-subject training with the combined denoising + glyph objective."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
import torch

from ..diffusion.checkpoint import load_checkpoint, save_checkpoint
from ..diffusion.schedule import NoiseSchedule, add_noise_batch
from ..diffusion.sampler import SamplerConfig, Trajectory, sample
from ..diffusion.unet import CondUnet, UnetConfig
from ..diffusion.vae import ConvVae, load_vae, vae_encode
from ..errors import MissingVae, NonFiniteLoss
from ..glyphcore.types import StyleSubject
from .losses import GuidanceSchedule, coefficient_f
from .prompts import PromptConditioning, PromptVocabulary, encode_prompt


@dataclass
class GeneratorConfig:
    learning_rate: float = 1e-4
    epochs: int = 1000
    batch_size: int = 8
    steps_per_epoch: int | None = None  # derived from the example grid when None
    seed: int = 0
    prompt_template_id: str = "default"
    guidance: GuidanceSchedule = field(default_factory=GuidanceSchedule)
    glyph_compare: str = "eps_hat"  # "denoised" compares the implied z0 instead
    schedule_T: int = 1000
    beta_start: float = 1e-4
    beta_end: float = 2e-2
    base_channels: int = 48
    emb_dim: int = 128
    max_glyphs_per_subject: int = 2

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.glyph_compare not in ("eps_hat", "denoised"):
            raise ValueError(f"unknown glyph_compare {self.glyph_compare!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["guidance"] = self.guidance.to_dict()
        return d

    def config_hash(self) -> str:
        return hashlib.sha256(
            json.dumps(self.to_dict(), sort_keys=True).encode()
        ).hexdigest()[:16]


class CorpusAccessAudit:
    """Records which corpus images a training run actually read."""

    def __init__(self):
        self.tags: list[str] = []

    def record(self, tag: str) -> None:
        self.tags.append(tag)


class GeneratorModel:
    """Trained generator: U-Net, prompt vocabulary, noise schedule."""

    def __init__(
        self,
        unet: CondUnet,
        vocab: PromptVocabulary,
        schedule: NoiseSchedule,
        subject_id: str,
        template_id: str = "default",
        meta: dict | None = None,
    ):
        self.unet = unet
        self.vocab = vocab
        self.schedule = schedule
        self.subject_id = subject_id
        self.template_id = template_id
        self.meta = meta or {}

    def encode_prompt(self, char: str, template_id: str | None = None) -> PromptConditioning:
        return encode_prompt(
            template_id or self.template_id, char, self.subject_id, self.vocab
        )

    def conditioning_rows(self, conds: list[PromptConditioning]) -> torch.Tensor:
        return torch.tensor([c.as_row() for c in conds], dtype=torch.long)

    def conditioning_vector(self, cond: PromptConditioning) -> torch.Tensor:
        with torch.no_grad():
            return self.unet.conditioning_vector(
                self.conditioning_rows([cond])
            )[0]

    def sample_chars(
        self,
        chars: list[str],
        sampler_config: SamplerConfig,
        rng: torch.Generator,
        template_id: str | None = None,
    ) -> tuple[torch.Tensor, Trajectory]:
        conds = [self.encode_prompt(c, template_id) for c in chars]
        return sample(
            self.unet, self.conditioning_rows(conds), sampler_config, self.schedule, rng
        )


def _encode_subject(
    subject: StyleSubject, vae: ConvVae, audit: CorpusAccessAudit | None
) -> tuple[torch.Tensor, torch.Tensor, list[str]]:
    style_latents = []
    for i, img in enumerate(subject.style_images):
        if audit is not None:
            tag = subject.style_image_tags[i] if subject.style_image_tags else f"style:{i}"
            audit.record(tag)
        style_latents.append(vae_encode(vae, np.asarray(img, dtype=np.float32)))
    glyph_latents = []
    chars = []
    for spec in subject.glyph_targets:
        rgb = np.repeat(spec.image[:, :, None], 3, axis=2).astype(np.float32)
        glyph_latents.append(vae_encode(vae, rgb))
        chars.append(spec.char)
    return (
        torch.from_numpy(np.stack(style_latents)).float(),
        torch.from_numpy(np.stack(glyph_latents)).float(),
        chars,
    )


def train_generator(
    subject: StyleSubject,
    config: GeneratorConfig,
    vae: ConvVae | str | Path,
    out_path: str | Path,
    run_dir: str | Path | None = None,
    audit: CorpusAccessAudit | None = None,
) -> Path:
    """Train one style subject and write a generator checkpoint.

    Each step draws a batch of (style image, glyph target) pairs and a
    shared timestep, then optimizes L_diff + f(t) * L_glyph. Per-step
    metrics go to run_dir/metrics.jsonl when a run directory is given.
    """
    vae_path: Path | None = None
    if isinstance(vae, (str, Path)):
        vae_path = Path(vae)
        if not vae_path.exists():
            raise MissingVae(f"VAE checkpoint not found: {vae_path}")
        vae = load_vae(vae_path)
    subject.validate(max_glyphs=config.max_glyphs_per_subject)

    style_latents, glyph_latents, chars = _encode_subject(subject, vae, audit)
    vocab = PromptVocabulary.build(chars, [subject.subject_id])
    schedule = NoiseSchedule(config.schedule_T, config.beta_start, config.beta_end)

    torch.manual_seed(config.seed)
    unet = CondUnet(
        UnetConfig(
            latent_channels=style_latents.shape[1],
            latent_side=style_latents.shape[-1],
            base_channels=config.base_channels,
            emb_dim=config.emb_dim,
            n_chars=len(vocab.chars),
            n_subjects=len(vocab.subjects),
            n_templates=len(vocab.templates),
            T=schedule.T,
        )
    )
    opt = torch.optim.Adam(unet.parameters(), lr=config.learning_rate)
    rng = np.random.default_rng(config.seed)
    noise_gen = torch.Generator().manual_seed(config.seed + 1)

    conds = [
        encode_prompt(config.prompt_template_id, c, subject.subject_id, vocab)
        for c in chars
    ]
    n_pairs = len(style_latents) * len(glyph_latents)
    steps_per_epoch = config.steps_per_epoch or max(1, math.ceil(n_pairs / config.batch_size))

    metrics_file = None
    if run_dir is not None:
        run_dir = Path(run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        metrics_file = (run_dir / "metrics.jsonl").open("w", encoding="utf-8")

    curves = {"L_diff": [], "L_glyph": [], "f_t": [], "L_total": [], "t": []}
    step = 0
    try:
        for _epoch in range(config.epochs):
            for _ in range(steps_per_epoch):
                t = int(rng.integers(0, schedule.T))
                style_idx = rng.integers(0, len(style_latents), size=config.batch_size)
                glyph_idx = rng.integers(0, len(glyph_latents), size=config.batch_size)

                z0 = style_latents[style_idx]
                z_g = glyph_latents[glyph_idx]
                eps = torch.randn(z0.shape, generator=noise_gen)
                t_batch = torch.full((config.batch_size,), t, dtype=torch.long)
                z_t = add_noise_batch(z0, t_batch, eps, schedule)
                cond_rows = torch.tensor(
                    [conds[g].as_row() for g in glyph_idx], dtype=torch.long
                )

                eps_hat = unet(z_t, t_batch, cond_rows)
                l_diff = torch.mean((eps_hat - eps) ** 2)
                if config.glyph_compare == "eps_hat":
                    glyph_pred = eps_hat
                else:
                    abar = schedule.alpha_bar(t)
                    glyph_pred = (z_t - math.sqrt(1.0 - abar) * eps_hat) / math.sqrt(abar)
                l_glyph = torch.mean((glyph_pred - z_g) ** 2)

                t_for_f = float(t) if config.guidance.t_source == "diffusion_timestep" else float(step)
                f_t = coefficient_f(t_for_f, config.guidance)
                loss = l_diff + f_t * l_glyph
                if not torch.isfinite(loss):
                    raise NonFiniteLoss(
                        f"loss non-finite at step {step} (L_diff={float(l_diff)}, "
                        f"L_glyph={float(l_glyph)}, f_t={f_t})"
                    )
                opt.zero_grad()
                loss.backward()
                opt.step()

                row = {
                    "step": step,
                    "t": t,
                    "L_diff": float(l_diff),
                    "L_glyph": float(l_glyph),
                    "f_t": f_t,
                    "L_total": float(loss),
                }
                for k in curves:
                    curves[k].append(row[k if k != "t" else "t"])
                if metrics_file is not None:
                    metrics_file.write(json.dumps(row) + "\n")
                step += 1
    finally:
        if metrics_file is not None:
            metrics_file.close()

    meta = {
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "subject_id": subject.subject_id,
        "chars": chars,
        "vocab": vocab.to_dict(),
        "unet_config": unet.config_dict(),
        "schedule": {
            "T": schedule.T,
            "beta_start": schedule.beta_start,
            "beta_end": schedule.beta_end,
        },
        "seed": config.seed,
        "loss_curves": curves,
        "accessed_corpus_tags": list(audit.tags) if audit is not None else None,
    }
    return save_checkpoint(
        out_path, "generator", {"unet": unet.state_dict()}, meta, parent=vae_path
    )


def load_generator(path: str | Path) -> GeneratorModel:
    meta, state = load_checkpoint(path, kind="generator")
    ucfg = dict(meta["unet_config"])
    ucfg["channel_mults"] = tuple(ucfg["channel_mults"])
    unet = CondUnet(UnetConfig(**ucfg))
    unet.load_state_dict(state["unet"])
    unet.eval()
    sched = meta["schedule"]
    return GeneratorModel(
        unet=unet,
        vocab=PromptVocabulary.from_dict(meta["vocab"]),
        schedule=NoiseSchedule(sched["T"], sched["beta_start"], sched["beta_end"]),
        subject_id=meta["subject_id"],
        template_id=meta["config"]["prompt_template_id"],
        meta=meta,
    )
