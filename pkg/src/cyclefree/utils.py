"""Helpers for cyclefree."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from awesomeversion import AwesomeVersion

GENERATION_STREAM = 0
TRIAL_STREAM = 1


@lru_cache
def get_awesome_version(version: str) -> AwesomeVersion:
    """Return a cached AwesomeVersion object."""
    return AwesomeVersion(version)


def derive_seed(
    master_seed: int, n: int, trial: int | None = None
) -> np.random.SeedSequence:
    """Derive an independent seed for one instance or one trial.

    The spawn key `(n, stream, index)` keeps the mapping injective: the
    generation stream of size n and trial i of size n never collide, and
    different master seeds give different entropy.

    Args:
    ----
        master_seed: Seed of the whole experiment.
        n: Instance size of the sweep point.
        trial: Trial index, or None for the instance generation stream.

    Returns:
    -------
        A NumPy SeedSequence.

    """
    if trial is None:
        key = (n, GENERATION_STREAM, 0)
    else:
        key = (n, TRIAL_STREAM, trial)
    return np.random.SeedSequence(master_seed, spawn_key=key)


def seed_record(
    seed: int | np.random.SeedSequence | None,
) -> tuple[int | None, tuple[int, ...] | None]:
    """Return (seed, spawn_key) that reproduce a seed or derived seed sequence.

    A sequence built by `derive_seed` reports its master seed and spawn
    key; sequences with OS entropy are not reproducible and report None.
    """
    if not isinstance(seed, np.random.SeedSequence):
        return seed, None
    entropy = seed.entropy
    if not isinstance(entropy, int) or entropy.bit_length() > 63:
        return None, None
    return entropy, tuple(int(part) for part in seed.spawn_key)


def make_rng(seed: int | np.random.SeedSequence | None) -> np.random.Generator:
    """Return a PCG64 generator for a seed or seed sequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def natural_log(n: int) -> float:
    """Return ln(n), clamped below at 1 so tiny graphs keep positive sizes."""
    return max(1.0, math.log(max(n, 1)))


def ceil_int(value: float) -> int:
    """Round a positive sample size up to an integer, at least 1."""
    return max(1, math.ceil(value))
