from .schedule import NoiseSchedule, add_noise
from .vae import ConvVae, VaeConfig, train_vae, load_vae, vae_encode, vae_decode
from .unet import CondUnet, UnetConfig, predict_noise
from .sampler import (
    SamplerConfig,
    DdimStep,
    Trajectory,
    ddim_step_with_logprob,
    ddim_timesteps,
    gaussian_log_prob,
    sample,
)
from .checkpoint import save_checkpoint, load_checkpoint, checkpoint_metadata, file_sha256

__all__ = [
    "NoiseSchedule",
    "add_noise",
    "ConvVae",
    "VaeConfig",
    "train_vae",
    "load_vae",
    "vae_encode",
    "vae_decode",
    "CondUnet",
    "UnetConfig",
    "predict_noise",
    "SamplerConfig",
    "DdimStep",
    "Trajectory",
    "ddim_step_with_logprob",
    "ddim_timesteps",
    "gaussian_log_prob",
    "sample",
    "save_checkpoint",
    "load_checkpoint",
    "checkpoint_metadata",
    "file_sha256",
]
