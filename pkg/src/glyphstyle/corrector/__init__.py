from .rewards import RewardRecord, count_penalty, base_reward, final_reward
from .advantage import compute_advantages
from .ppo import PpoConfig, ppo_loss, ppo_loss_terms
from .trajectories import StepRecord, TrajectoryRecord, sample_trajectories, logprob_hash
from .train import train_corrector, load_corrector

__all__ = [
    "RewardRecord",
    "count_penalty",
    "base_reward",
    "final_reward",
    "compute_advantages",
    "PpoConfig",
    "ppo_loss",
    "ppo_loss_terms",
    "StepRecord",
    "TrajectoryRecord",
    "sample_trajectories",
    "logprob_hash",
    "train_corrector",
    "load_corrector",
]
