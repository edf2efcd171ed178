"""Seed plumbing: one root seed, named child generators."""

from __future__ import annotations

import hashlib

import numpy as np


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def child(seed: int, name: str) -> np.random.Generator:
    """Independent generator for a named purpose, reproducible from ``seed``."""
    key = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "little")
    return np.random.default_rng(np.random.SeedSequence([seed, key]))
