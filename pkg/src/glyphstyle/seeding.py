"""Seed plumbing: one root seed, per-component child streams.

All stochastic code takes an explicit generator; nothing reads ambient
global RNG state. Components are named so that adding a new consumer
never shifts the streams of existing ones.
"""

from __future__ import annotations

import numpy as np
import torch


def component_seed(root_seed: int, component: str) -> int:
    """Derive a stable 32-bit seed for a named component."""
    ss = np.random.SeedSequence([root_seed, _component_key(component)])
    return int(ss.generate_state(1)[0])


def numpy_rng(root_seed: int, component: str) -> np.random.Generator:
    return np.random.default_rng(component_seed(root_seed, component))


def torch_generator(root_seed: int, component: str) -> torch.Generator:
    gen = torch.Generator()
    gen.manual_seed(component_seed(root_seed, component))
    return gen


def _component_key(component: str) -> int:
    # FNV-1a, stable across processes (unlike hash()).
    h = 0x811C9DC5
    for byte in component.encode("utf-8"):
        h = ((h ^ byte) * 0x01000193) & 0xFFFFFFFF
    return h
