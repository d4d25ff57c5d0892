"""Uncorrelated reference source with independent uniformly random polarizations on each arm."""
import numpy as np

from ...basesource import BasePolarizationSource, EmissionBatch
from ...optics import UNIFORM


class UniformRandomSource(BasePolarizationSource):
    model = UNIFORM

    def draw_signals(self):
        angles = self.hidden_rng.uniform(0.0, np.pi, size=(self.n_events, 2))
        left = np.stack([np.cos(angles[:, 0]), np.sin(angles[:, 0])], axis=-1)
        right = np.stack([np.cos(angles[:, 1]), np.sin(angles[:, 1])], axis=-1)
        # only the left angle is carried as the tag; the arms are independent
        return left, right, angles[:, 0]


def uniform_random_source(seed: int, n_events: int, mean_rate: float = 1000.0) -> EmissionBatch:
    return UniformRandomSource(seed=seed, n_events=n_events, mean_rate=mean_rate).emit()
