"""Setting-pair pipeline: source emissions through the analyzers into detectors, counters and estimators."""
import logging
from dataclasses import dataclass, field
from typing import Optional
from warnings import warn

import numpy as np
import pandas as pd
from tqdm import tqdm

from .detection import CoincidenceCounts, coincident_sequences, count_coincidences, detect_emissions, run_duration
from .exceptions import ConfigurationError, DegenerateInputError
from .optics import (
    BARUT,
    FURRY,
    LOCKED_MODE,
    UNIFORM,
    analytic_correlation,
    locked_mode_joint_amplitude,
    project_fields,
)
from .sources import source_classes
from .statistics import (
    CorrelationEstimate,
    double_measurement_correlation,
    eventwise_correlation,
    four_channel_correlation,
    normalized_correlation_estimate,
)
from .utils.io import RESULT_COLUMNS
from .utils.random import derive_seed, make_rng

logger = logging.getLogger(__name__)

FOUR_CHANNEL = "four-channel"
NORMALIZED = "normalized"
DOUBLE_MEASUREMENT = "double-measurement"
SIGN = "sign"
ESTIMATORS = (FOUR_CHANNEL, NORMALIZED, DOUBLE_MEASUREMENT, SIGN)

CANONICAL_ESTIMATOR = {
    LOCKED_MODE: FOUR_CHANNEL,
    FURRY: NORMALIZED,
    UNIFORM: FOUR_CHANNEL,
    BARUT: NORMALIZED,
}


@dataclass(frozen=True)
class SettingPairResult:
    model: str
    theta1: float
    theta2: float
    estimates: dict
    counts: Optional[CoincidenceCounts] = None
    sequences: Optional[tuple] = field(default=None, repr=False)

    @property
    def theta(self) -> float:
        return self.theta1 - self.theta2

    @property
    def canonical(self) -> CorrelationEstimate:
        return self.estimates[CANONICAL_ESTIMATOR[self.model]]

    def to_rows(self) -> list:
        return [
            dict(theta=self.theta, model=self.model, estimator=name, value=e.value, std_err=e.std_err, n=e.n)
            for name, e in self.estimates.items()
        ]


def _polarization_source(model: str):
    source = source_classes.get(model)
    if source is None or not hasattr(source, "draw_signals"):
        raise ConfigurationError(f"'{model}' is not a polarization model with a source.")
    return source


def simulate_setting_pair(
    model: str,
    theta1: float,
    theta2: float,
    n_events: int,
    seed: int,
    mean_rate: float = 1000.0,
    efficiency: float = 1.0,
    jitter: float = 0.0,
    window: float = 1e-6,
    dark_count_rate: float = 0.0,
    single_mode: bool = False,
    keep_sequences: bool = False,
) -> SettingPairResult:
    """
    Run one polarization source at one setting pair and evaluate every estimator defined for it.

    four-channel uses the coincidence counts, normalized the per-emission +1 channel intensities
    of both arms, and double-measurement (locked-mode only) the joint intensity of the double signal.
    """
    if n_events < 1:
        raise ConfigurationError(f"n_events must be at least 1, got {n_events}.")
    source = _polarization_source(model)
    batch = source(seed=derive_seed(seed, 0), n_events=n_events, mean_rate=mean_rate).emit()
    stream_a, stream_b = detect_emissions(
        batch,
        theta1,
        theta2,
        make_rng(seed, 1),
        efficiency=efficiency,
        jitter=jitter,
        dark_count_rate=dark_count_rate,
    )
    duration = run_duration(n_events, mean_rate, stream_a, stream_b)
    counts = count_coincidences(stream_a, stream_b, window, duration)

    estimates = {}
    try:
        estimates[FOUR_CHANNEL] = four_channel_correlation(counts)
    except DegenerateInputError:
        warn(f"No coincidences for {model} at ({theta1:g}, {theta2:g}); four-channel estimate skipped.")
    if n_events >= 2:
        i_plus_a, _ = project_fields(theta1, batch.left)
        i_plus_b, _ = project_fields(theta2, batch.right)
        try:
            estimates[NORMALIZED] = normalized_correlation_estimate(i_plus_a, i_plus_b)
        except DegenerateInputError:
            warn(f"Vanishing intensities for {model} at ({theta1:g}, {theta2:g}); normalized estimate skipped.")
    if model == LOCKED_MODE:
        nu = batch.hidden * np.pi / 2.0
        joint = locked_mode_joint_amplitude(nu, theta1 - theta2) ** 2
        estimates[DOUBLE_MEASUREMENT] = double_measurement_correlation(
            joint,
            np.einsum("ij,ij->i", batch.left, batch.left),
            np.einsum("ij,ij->i", batch.right, batch.right),
            single_mode=single_mode,
        )
    sequences = coincident_sequences(stream_a, stream_b, window) if keep_sequences else None
    return SettingPairResult(model, float(theta1), float(theta2), estimates, counts=counts, sequences=sequences)


def spin_samples(theta: float, n_events: int, seed: int):
    """Barut outcomes A = S1.a and B = S2.b with a along z and b at angle theta in the x-z plane."""
    batch = source_classes[BARUT](seed=derive_seed(seed, 0), n_events=n_events).emit()
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([np.sin(theta), 0.0, np.cos(theta)])
    return batch.s1 @ a, batch.s2 @ b


def simulate_spin_correlation(theta: float, n_events: int, seed: int) -> SettingPairResult:
    """Monte Carlo correlation of the Barut spin model; adds the eventwise correlation of the outcome signs."""
    if n_events < 2:
        raise ConfigurationError(f"n_events must be at least 2, got {n_events}.")
    samples_a, samples_b = spin_samples(theta, n_events, seed)
    estimates = {NORMALIZED: normalized_correlation_estimate(samples_a, samples_b)}
    signs_a, signs_b = np.where(samples_a >= 0, 1, -1), np.where(samples_b >= 0, 1, -1)
    estimates[SIGN] = eventwise_correlation(signs_a, signs_b)
    return SettingPairResult(BARUT, float(theta), 0.0, estimates)


def simulate(model: str, theta1: float, theta2: float, n_events: int, seed: int, **options) -> SettingPairResult:
    """Dispatch to the spin or polarization pipeline."""
    if model == BARUT:
        return simulate_spin_correlation(theta1 - theta2, n_events, seed)
    return simulate_setting_pair(model, theta1, theta2, n_events, seed, **options)


def correlation_sweep(
    model: str, angles, n_events: int, seed: int, progress: bool = False, **options
) -> pd.DataFrame:
    """Result table with one row per (angle, estimator); analyzer B stays at 0 and A sweeps the angles."""
    rows = []
    for k, theta in enumerate(tqdm(list(angles), desc=f"{model} sweep", disable=not progress)):
        result = simulate(model, float(theta), 0.0, n_events, derive_seed(seed, k), **options)
        logger.debug("theta=%g: %s", theta, {name: e.value for name, e in result.estimates.items()})
        rows.extend(result.to_rows())
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def analytic_table(model: str, angles) -> pd.DataFrame:
    """Closed-form correlations in the result-table layout, with zero standard error."""
    rows = [
        dict(
            theta=float(theta),
            model=model,
            estimator="analytic",
            value=analytic_correlation(model, theta),
            std_err=0.0,
            n=0,
        )
        for theta in angles
    ]
    return pd.DataFrame(rows, columns=RESULT_COLUMNS)


def _z_score(difference: float, std_err: float) -> float:
    if std_err > 0:
        return difference / std_err
    return 0.0 if difference <= 1e-12 else np.inf


def deviation_report(table: pd.DataFrame, oracle: str) -> dict:
    """
    Join result rows against the closed-form correlation of oracle.

    Rows evaluated with their model's canonical estimator are compared when present; otherwise
    every row is. Reports the largest absolute deviation, the largest deviation in standard errors
    and the angle at which the absolute deviation peaks.
    """
    missing = [column for column in RESULT_COLUMNS if column not in table.columns]
    if missing:
        raise ConfigurationError(f"The result table lacks the columns {missing}.")
    if len(table) == 0:
        raise ConfigurationError("The result table has no rows.")
    table = table.copy()
    for column in ("theta", "value", "std_err"):
        try:
            table[column] = pd.to_numeric(table[column], errors="raise")
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"The result column '{column}' must be numeric: {e}") from e
    canonical = table["estimator"] == table["model"].map(CANONICAL_ESTIMATOR)
    rows = table[canonical] if canonical.any() else table
    expected = np.array([analytic_correlation(oracle, theta) for theta in rows["theta"]])
    difference = np.abs(rows["value"].to_numpy(dtype=float) - expected)
    z = np.array([_z_score(d, s) for d, s in zip(difference, rows["std_err"].to_numpy(dtype=float))])
    index = int(np.argmax(difference))
    return dict(
        oracle=oracle,
        n_rows=int(len(rows)),
        max_abs_deviation=float(difference[index]),
        argmax_theta=float(rows["theta"].iloc[index]),
        max_z=float(z.max()),
    )
