"""Locked-mode double-signal source confined to the horizontal and vertical polarization modes."""
import numpy as np

from ...basesource import BasePolarizationSource, EmissionBatch
from ...optics import LOCKED_MODE

# Rows indexed by n: S1 = (cos(n pi/2), sin(n pi/2)), S2 = (sin(n pi/2), -cos(n pi/2)), written out exactly
LEFT_MODES = np.array([[1.0, 0.0], [0.0, 1.0]])
RIGHT_MODES = np.array([[0.0, -1.0], [1.0, 0.0]])


class LockedModeSource(BasePolarizationSource):
    """Antisymmetric pairs whose hidden variable n in {0, 1} is redrawn for every pair."""

    model = LOCKED_MODE

    def __init__(self, seed: int, n_events: int, mean_rate: float = 1000.0):
        """
        Create a locked-mode source.

        Parameters
        ----------
        seed: int
            Master seed of the source's random streams.
        n_events: int
            Number of pair emissions.
        mean_rate: float, optional
            Mean emission rate in events per second. Default is 1000.
        """
        super().__init__(seed=seed, n_events=n_events, mean_rate=mean_rate)

    def draw_signals(self):
        n = self.hidden_rng.integers(0, 2, size=self.n_events)
        return LEFT_MODES[n], RIGHT_MODES[n], n


def locked_mode_source(seed: int, n_events: int, mean_rate: float = 1000.0) -> EmissionBatch:
    return LockedModeSource(seed=seed, n_events=n_events, mean_rate=mean_rate).emit()
