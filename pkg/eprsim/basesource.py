"""Base class and emission containers shared by every pair source."""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .exceptions import ConfigurationError
from .optics import FieldVector
from .utils.json_schema import get_schema_from_method_signature
from .utils.random import spawn_rngs


@dataclass(frozen=True)
class PairEmission:
    left: FieldVector
    right: FieldVector
    lambda_: float
    emit_time: float


@dataclass(frozen=True)
class SpinPairEmission:
    s1: np.ndarray
    s2: np.ndarray
    lambda_: tuple


@dataclass(frozen=True)
class EmissionBatch:
    """
    A pre-materialized stream of polarization pair emissions.

    left and right are (n, 2) arrays of mode amplitudes, hidden the (n,) hidden variable
    per emission and emit_time the (n,) strictly increasing emission times in seconds.
    """

    model: str
    left: np.ndarray
    right: np.ndarray
    hidden: np.ndarray
    emit_time: np.ndarray

    def __post_init__(self):
        for array in (self.left, self.right, self.hidden, self.emit_time):
            array.setflags(write=False)

    def __len__(self) -> int:
        return len(self.emit_time)

    def __iter__(self) -> Iterator[PairEmission]:
        for left, right, hidden, t in zip(self.left, self.right, self.hidden, self.emit_time):
            yield PairEmission(
                left=FieldVector(float(left[0]), float(left[1])),
                right=FieldVector(float(right[0]), float(right[1])),
                lambda_=float(hidden),
                emit_time=float(t),
            )

    @property
    def duration(self) -> float:
        return float(self.emit_time[-1]) if len(self) else 0.0


@dataclass(frozen=True)
class SpinEmissionBatch:
    """Pre-materialized spin pair emissions; s1 and s2 are (n, 3) unit vectors with s2 = -s1."""

    model: str
    s1: np.ndarray
    s2: np.ndarray
    gamma: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        for array in (self.s1, self.s2, self.gamma, self.phi):
            array.setflags(write=False)

    def __len__(self) -> int:
        return len(self.s1)

    def __iter__(self) -> Iterator[SpinPairEmission]:
        for s1, s2, gamma, phi in zip(self.s1, self.s2, self.gamma, self.phi):
            yield SpinPairEmission(s1=s1, s2=s2, lambda_=(float(gamma), float(phi)))


class BaseSource(ABC):
    """
    Primary class for all pair sources.

    A source is a single-owner generator seeded once; emit() materializes the full stream,
    which is then immutable and freely shareable.
    """

    model = None

    @classmethod
    def get_source_schema(cls):
        """Compile input schema for the source from its constructor."""
        return get_schema_from_method_signature(cls.__init__)

    def __init__(self, seed: int, n_events: int, **source_data):
        if n_events < 0:
            raise ConfigurationError(f"n_events must be non-negative, got {n_events}.")
        self.seed = seed
        self.n_events = int(n_events)
        self.source_data = dict(seed=seed, n_events=n_events, **source_data)
        self.reset_streams()

    def reset_streams(self):
        """Rewind the hidden-variable and timing generators so every emit() yields the same stream."""
        self.hidden_rng, self.timing_rng = spawn_rngs(self.seed, 2)

    @abstractmethod
    def emit(self):
        pass

    def __iter__(self):
        return iter(self.emit())


class BasePolarizationSource(BaseSource, ABC):
    """Sources emitting polarization signals at Poisson-distributed times."""

    def __init__(self, seed: int, n_events: int, mean_rate: float = 1000.0):
        if not mean_rate > 0:
            raise ConfigurationError(f"mean_rate must be positive, got {mean_rate}.")
        super().__init__(seed=seed, n_events=n_events, mean_rate=mean_rate)
        self.mean_rate = float(mean_rate)

    def emission_times(self) -> np.ndarray:
        """Homogeneous Poisson process: i.i.d. exponential gaps with mean 1/mean_rate."""
        return np.cumsum(self.timing_rng.exponential(1.0 / self.mean_rate, size=self.n_events))

    @abstractmethod
    def draw_signals(self):
        """Return (left, right, hidden) arrays for n_events emissions."""
        pass

    def emit(self) -> EmissionBatch:
        self.reset_streams()
        left, right, hidden = self.draw_signals()
        return EmissionBatch(
            model=self.model,
            left=np.ascontiguousarray(left, dtype=float).reshape(self.n_events, 2),
            right=np.ascontiguousarray(right, dtype=float).reshape(self.n_events, 2),
            hidden=np.asarray(hidden, dtype=float),
            emit_time=self.emission_times(),
        )
