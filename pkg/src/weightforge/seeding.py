"""Deterministic seed derivation.

Every stage and every per-identity work item draws its randomness from a
seed derived from (master seed, label path).  Derivation is stable across
processes and platforms, which is what makes resumable and parallel runs
reproduce byte-identical artifacts.
"""

from __future__ import annotations

import hashlib

import numpy as np
import torch


def derive_seed(master_seed: int, *labels) -> int:
    """Hash (master_seed, labels...) into a 63-bit seed."""
    h = hashlib.sha256()
    h.update(str(int(master_seed)).encode())
    for label in labels:
        h.update(b"/")
        h.update(str(label).encode())
    return int.from_bytes(h.digest()[:8], "little") & 0x7FFF_FFFF_FFFF_FFFF


def rng_for(master_seed: int, *labels) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, *labels))


def torch_generator(master_seed: int, *labels) -> torch.Generator:
    gen = torch.Generator()
    gen.manual_seed(derive_seed(master_seed, *labels))
    return gen


def seed_torch(master_seed: int, *labels) -> None:
    """Seed torch's global RNG (used for module initialization)."""
    torch.manual_seed(derive_seed(master_seed, *labels))
