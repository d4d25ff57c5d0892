"""Deterministic splitting of one master seed into independent generator streams."""
import numpy as np


def make_rng(seed: int, *spawn_key: int) -> np.random.Generator:
    """
    Return a Generator for the sub-stream addressed by spawn_key under the master seed.

    The same (seed, spawn_key) always yields the same stream; distinct keys yield
    statistically independent streams.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in spawn_key)))


def spawn_rngs(seed: int, n: int, *spawn_key: int) -> list:
    """Split the sub-stream at spawn_key into n child generators."""
    parent = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return [np.random.default_rng(child) for child in parent.spawn(n)]


def derive_seed(seed: int, *spawn_key: int) -> int:
    """Integer seed of the sub-stream at spawn_key, for components that take a plain seed."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in spawn_key))
    return int(sequence.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))
