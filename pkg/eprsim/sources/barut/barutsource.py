"""Barut continuous-spin source with exactly anticorrelated random spin axes."""
import numpy as np

from ...basesource import BaseSource, SpinEmissionBatch
from ...optics import BARUT


class BarutSource(BaseSource):
    """S1 uniform on the unit sphere and S2 = -S1 for every pair."""

    model = BARUT

    def __init__(self, seed: int, n_events: int):
        super().__init__(seed=seed, n_events=n_events)

    def emit(self) -> SpinEmissionBatch:
        self.reset_streams()
        u = self.hidden_rng.random(size=self.n_events)
        # inverse CDF of the sin(gamma)/2 density on [0, pi]
        gamma = np.arccos(1.0 - 2.0 * u)
        phi = self.hidden_rng.uniform(0.0, 2.0 * np.pi, size=self.n_events)
        sin_gamma = np.sin(gamma)
        s1 = np.stack([sin_gamma * np.cos(phi), sin_gamma * np.sin(phi), np.cos(gamma)], axis=-1)
        return SpinEmissionBatch(model=self.model, s1=s1, s2=-s1, gamma=gamma, phi=phi)


def barut_source(seed: int, n_events: int) -> SpinEmissionBatch:
    return BarutSource(seed=seed, n_events=n_events).emit()
