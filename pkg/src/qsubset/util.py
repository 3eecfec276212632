"""Small shared helpers: RNG stream derivation and array coercion."""

from __future__ import annotations

import numpy as np


def substream(seed, *key: int) -> np.random.Generator:
    """Return an independent generator derived from ``seed`` and an integer key.

    Streams with distinct keys are statistically independent of each other
    and of ``default_rng(seed)`` itself, and are reproducible given the same
    ``(seed, key)`` pair.
    """
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def derived_seed(seed, *key: int) -> int:
    """Collapse ``(seed, key)`` into a single reproducible 64-bit integer."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])


def as_rng(rng) -> np.random.Generator:
    """Coerce ``rng`` (Generator, int seed, or None) to a Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def as_float_matrix(x, name: str = "X") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x


def as_float_vector(x, name: str = "y") -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError(f"{name} contains non-finite entries")
    return x
