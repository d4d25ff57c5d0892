"""Furry mixture source: each pair is emitted in one definite pair of orthogonal modes."""
import numpy as np

from ...basesource import BasePolarizationSource, EmissionBatch
from ...optics import FURRY


class FurrySource(BasePolarizationSource):
    """
    Arm A polarized along nu, arm B along nu + pi/2, with nu uniform on [0, pi).

    After projection onto an analyzer frame the arm amplitudes reduce to E_A = cos(nu) and
    E_B = sin(nu).
    """

    model = FURRY

    def draw_signals(self):
        nu = self.hidden_rng.uniform(0.0, np.pi, size=self.n_events)
        c, s = np.cos(nu), np.sin(nu)
        left = np.stack([c, s], axis=-1)
        right = np.stack([-s, c], axis=-1)
        return left, right, nu


def furry_source(seed: int, n_events: int, mean_rate: float = 1000.0) -> EmissionBatch:
    return FurrySource(seed=seed, n_events=n_events, mean_rate=mean_rate).emit()
