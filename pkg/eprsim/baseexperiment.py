"""Base class for named, configuration-driven experiments."""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from .exceptions import ConfigurationError
from .utils.json_schema import get_base_schema, get_schema_from_method_signature

ANGLE_PRESETS = {
    "chsh-optimal": [0.0, np.pi / 4, np.pi / 8, 3 * np.pi / 8],
    "optimal": [0.0, np.pi / 4, np.pi / 8, 3 * np.pi / 8],
    "sweep-16": (np.arange(16) * np.pi / 16).tolist(),
    "barut-32": np.linspace(0.0, np.pi, 32).tolist(),
}


def resolve_angles(angles) -> list:
    """Expand a preset name into its angles; lists pass through as floats."""
    if isinstance(angles, str):
        if angles not in ANGLE_PRESETS:
            raise ConfigurationError(f"Unknown angle preset '{angles}'; expected one of {sorted(ANGLE_PRESETS)}.")
        return list(ANGLE_PRESETS[angles])
    angles = [float(a) for a in angles]
    if not angles or not np.all(np.isfinite(angles)):
        raise ConfigurationError(f"angles must be a non-empty list of finite radians, got {angles}.")
    return angles


@dataclass
class ExperimentResult:
    """Result table written as the experiment CSV, the scalars of the JSON summary, and optional side tables."""

    table: pd.DataFrame
    scalars: dict
    extra_tables: dict = field(default_factory=dict)


class BaseExperiment(ABC):
    """
    Primary class for all experiments.

    The constructor receives the fields every experiment shares; run_experiment receives the
    experiment's own options, whose schema is compiled from its signature.
    """

    name = None
    models = ()
    default_angles = None
    default_n_events = None

    @classmethod
    def get_source_schema(cls):
        return get_schema_from_method_signature(cls.__init__)

    @classmethod
    def get_options_schema(cls):
        options_schema = get_base_schema(title=f"Options of the {cls.name} experiment")
        options_schema.update(get_schema_from_method_signature(cls.run_experiment))
        return options_schema

    def __init__(self, seed: int, model: Optional[str] = None, n_events: Optional[int] = None, progress: bool = False):
        if self.models and model not in self.models:
            raise ConfigurationError(f"Experiment '{self.name}' needs a model among {self.models}, got '{model}'.")
        if n_events is None:
            n_events = self.default_n_events
        if n_events is None or n_events < 1:
            raise ConfigurationError(f"Experiment '{self.name}' needs n_events >= 1, got {n_events}.")
        self.seed = int(seed)
        self.model = model
        self.n_events = int(n_events)
        self.progress = progress

    @abstractmethod
    def run_experiment(self, **options) -> ExperimentResult:
        pass
