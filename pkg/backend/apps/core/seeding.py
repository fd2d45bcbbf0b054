"""Deterministic derivation of random streams from a single base seed.

A stream is identified by the base seed plus a tuple of integer keys
(fold index, replicate index, draw attempt, ...). The same identifiers always
give the same stream, whatever else is computed around it.
"""
import numpy as np


def seed_sequence(base_seed: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(base_seed), spawn_key=tuple(int(k) for k in keys))


def derive_seed(base_seed: int, *keys: int) -> int:
    """Return a 63-bit integer seed for the stream ``(base_seed, *keys)``."""
    state = seed_sequence(base_seed, *keys).generate_state(1, dtype=np.uint64)[0]
    return int(state >> np.uint64(1))


def stream(base_seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(base_seed, *keys))
