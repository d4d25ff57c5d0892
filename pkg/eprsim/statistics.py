"""
Correlation estimators and Bell-type inequality evaluators.

Sums over +/-1 sequences are carried out in integer arithmetic; tautology bounds are
compared exactly against the integer sums rather than against rounded means.
"""
import logging
from dataclasses import dataclass
from itertools import cycle
from typing import Optional, Sequence

import numpy as np
from tqdm import tqdm

from .detection import CoincidenceCounts
from .exceptions import ConfigurationError, DegenerateInputError, InputError
from .optics import BARUT, FURRY, LOCKED_MODE, QM_ORACLE, UNIFORM
from .utils.random import make_rng

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-12
CHSH_BOUND = 2.0
EIGHT_SEQUENCE_BOUND = 4.0
TRIVIAL_BOUND = 2.0


@dataclass(frozen=True)
class SettingPair:
    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise InputError(f"Settings must be finite, got ({self.a}, {self.b}).")

    @property
    def theta(self) -> float:
        return self.a - self.b


@dataclass(frozen=True)
class CorrelationEstimate:
    value: float
    n: int
    std_err: float

    def __post_init__(self):
        if abs(self.value) > 1 + BOUND_TOLERANCE:
            raise InputError(f"A correlation must lie in [-1, 1], got {self.value}.")
        if self.std_err < 0:
            raise InputError(f"std_err must be non-negative, got {self.std_err}.")


@dataclass(frozen=True)
class DichotomicSequence:
    """A non-empty sequence of +/-1 outcomes recorded at one setting."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or len(values) == 0:
            raise InputError("A dichotomic sequence must be one-dimensional and non-empty.")
        if not np.all((values == 1) | (values == -1)):
            raise InputError(f"Dichotomic sequence '{self.label}' holds values other than +1 and -1.")
        values = values.astype(np.int64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class FuzzReport:
    n_trials: int
    n_violations: int
    max_lhs: float
    bound: float


@dataclass(frozen=True)
class BoundReport:
    model: str
    kind: str
    value: float


def _dichotomic(x, label: str = "") -> np.ndarray:
    if isinstance(x, DichotomicSequence):
        return x.values
    return DichotomicSequence(np.asarray(x), label=label).values


def _real_samples(samples, name: str) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1:
        raise InputError(f"{name} must be one-dimensional.")
    if not np.all(np.isfinite(samples)):
        raise InputError(f"{name} contains non-finite values.")
    return samples


def _paired_samples(samples_a, samples_b, min_length: int = 1):
    a = _real_samples(samples_a, "samples_a")
    b = _real_samples(samples_b, "samples_b")
    if len(a) != len(b):
        raise InputError(f"Sample lengths differ: {len(a)} and {len(b)}.")
    if len(a) < min_length:
        raise InputError(f"At least {min_length} samples are required, got {len(a)}.")
    return a, b


def eventwise_correlation(x, y) -> CorrelationEstimate:
    """(1/N) sum x_i y_i over two +/-1 sequences, with the sample standard error of the products."""
    x = _dichotomic(x, "x")
    y = _dichotomic(y, "y")
    if len(x) != len(y):
        raise InputError(f"Sequence lengths differ: {len(x)} and {len(y)}.")
    products = x * y
    n = len(products)
    value = int(products.sum()) / n
    std_err = float(np.std(products, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return CorrelationEstimate(value=value, n=n, std_err=std_err)


def normalized_correlation(samples_a, samples_b) -> float:
    """
    Normalized correlation (<AB> - <A><B>) / sqrt(<A^2><B^2>).

    <AB> is the plain mean of elementwise products; the denominator uses raw second moments.
    """
    a, b = _paired_samples(samples_a, samples_b, min_length=2)
    denominator = np.sqrt(np.mean(a * a) * np.mean(b * b))
    if denominator == 0:
        raise DegenerateInputError("Zero second moment: the normalized correlation is undefined.")
    return float((np.mean(a * b) - np.mean(a) * np.mean(b)) / denominator)


def normalized_correlation_estimate(samples_a, samples_b, n_batches: int = 32) -> CorrelationEstimate:
    """normalized_correlation with a batch-means standard error over contiguous blocks."""
    a, b = _paired_samples(samples_a, samples_b, min_length=2)
    value = normalized_correlation(a, b)
    n_batches = min(n_batches, len(a) // 2)
    if n_batches < 2:
        return CorrelationEstimate(value=float(np.clip(value, -1, 1)), n=len(a), std_err=0.0)
    batch_values = []
    for batch_a, batch_b in zip(np.array_split(a, n_batches), np.array_split(b, n_batches)):
        try:
            batch_values.append(normalized_correlation(batch_a, batch_b))
        except DegenerateInputError:
            continue
    std_err = float(np.std(batch_values, ddof=1) / np.sqrt(len(batch_values))) if len(batch_values) > 1 else 0.0
    return CorrelationEstimate(value=float(np.clip(value, -1, 1)), n=len(a), std_err=std_err)


def four_channel_correlation(counts: CoincidenceCounts) -> CorrelationEstimate:
    """(n_pp + n_mm - n_pm - n_mp) / total, with binomial standard error sqrt((1 - E^2) / total)."""
    total = counts.total
    if total == 0:
        raise DegenerateInputError("No coincidences were counted: the four-channel correlation is undefined.")
    value = (counts.n_pp + counts.n_mm - counts.n_pm - counts.n_mp) / total
    return CorrelationEstimate(value=value, n=total, std_err=float(np.sqrt(max(1.0 - value * value, 0.0) / total)))


def double_measurement_correlation(joint_intensity, intensity_a, intensity_b, single_mode: bool = False):
    """
    Correlation from the mean joint intensity of a double signal: (2 <J> - 1) / sqrt(<I_A><I_B>).

    The factor 2 counts the double measurement, one per mode in each arm. With single_mode=True
    the factor is dropped and the estimate ranges over [-1, 0].
    """
    joint = _real_samples(joint_intensity, "joint_intensity")
    intensity_a, intensity_b = _paired_samples(intensity_a, intensity_b)
    if len(joint) == 0 or len(joint) != len(intensity_a):
        raise InputError("joint_intensity must be non-empty and as long as the arm intensities.")
    denominator = np.sqrt(np.mean(intensity_a) * np.mean(intensity_b))
    if denominator == 0:
        raise DegenerateInputError("Zero mean arm intensity: the double-measurement correlation is undefined.")
    factor = 1.0 if single_mode else 2.0
    value = (factor * np.mean(joint) - 1.0) / denominator
    n = len(joint)
    std_err = factor * np.std(joint, ddof=1) / np.sqrt(n) / denominator if n > 1 else 0.0
    return CorrelationEstimate(value=float(np.clip(value, -1, 1)), n=n, std_err=float(std_err))


def _check_correlations(*correlations):
    for p in correlations:
        if not np.isfinite(p) or abs(p) > 1 + BOUND_TOLERANCE:
            raise InputError(f"Correlations must lie in [-1, 1], got {p}.")


def chsh(p_ab: float, p_ab_prime: float, p_a_prime_b_prime: float, p_a_prime_b: float) -> float:
    """|P(a,b) - P(a,b')| + |P(a',b') + P(a',b)|."""
    _check_correlations(p_ab, p_ab_prime, p_a_prime_b_prime, p_a_prime_b)
    return float(abs(p_ab - p_ab_prime) + abs(p_a_prime_b_prime + p_a_prime_b))


def chsh_from_settings(correlation, a: float, a_prime: float, b: float, b_prime: float) -> float:
    """chsh evaluated on a correlation function of the relative angle."""
    return chsh(correlation(a - b), correlation(a - b_prime), correlation(a_prime - b_prime), correlation(a_prime - b))


def chsh_lattice_max(correlation=lambda theta: -np.cos(2.0 * theta), step_degrees: float = 1.0):
    """
    Maximum of chsh for a correlation function of the relative angle over a lattice of all four settings.

    Fixing a = 0 loses nothing for a function of differences. Returns (max, (a, a', b, b')).
    """
    grid = np.deg2rad(np.arange(0.0, 180.0, step_degrees))
    b = grid[:, None]
    b_prime = grid[None, :]
    first = np.abs(correlation(-b) - correlation(-b_prime))
    best, best_settings = -np.inf, None
    for a_prime in grid:
        values = first + np.abs(correlation(a_prime - b_prime) + correlation(a_prime - b))
        index = np.unravel_index(np.argmax(values), values.shape)
        if values[index] > best:
            best = float(values[index])
            best_settings = (0.0, float(a_prime), float(grid[index[0]]), float(grid[index[1]]))
    return best, best_settings


def amended_bound(samples_a, samples_b) -> float:
    """2 + 2 <A><B> / sqrt(<A^2><B^2>); reduces to the CHSH bound for mean-zero samples."""
    a, b = _paired_samples(samples_a, samples_b)
    denominator = np.sqrt(np.mean(a * a) * np.mean(b * b))
    if denominator == 0:
        raise DegenerateInputError("Zero second moment: the amended bound is undefined.")
    return float(2.0 + 2.0 * np.mean(a) * np.mean(b) / denominator)


def trivial_bound_check(p_ab: float, p_ab_prime: float):
    """|P(a,b) - P(a,b')| <= 2, the only bound left when hidden variables fix outcomes deterministically."""
    _check_correlations(p_ab, p_ab_prime)
    lhs = float(abs(p_ab - p_ab_prime))
    return lhs, lhs <= TRIVIAL_BOUND + BOUND_TOLERANCE


def sica_check(a, a_prime, b, b_prime):
    """
    Evaluate |<ab> + <ab'>| + |<a'b> - <a'b'>| over four +/-1 sequences of one length N.

    The bound 2 holds for every input; it is checked on the integer sums, i.e. against 2N.
    Returns (lhs, holds).
    """
    a, a_prime = _dichotomic(a, "a"), _dichotomic(a_prime, "a'")
    b, b_prime = _dichotomic(b, "b"), _dichotomic(b_prime, "b'")
    n = len(a)
    if not len(a_prime) == len(b) == len(b_prime) == n:
        raise InputError("All four sequences must have the same length.")
    lhs_sum = abs(int(a @ b) + int(a @ b_prime)) + abs(int(a_prime @ b) - int(a_prime @ b_prime))
    return lhs_sum / n, lhs_sum <= 2 * n


def eight_sequence_check(runs: Sequence):
    """
    Bell combination over four independently generated runs of paired sequences.

    runs holds (x, y) pairs for the setting combinations (a, b), (a, b'), (a', b') and (a', b)
    in the argument order of chsh. Each run has its own length. Returns (lhs, bound) with bound 4.
    """
    runs = list(runs)
    if len(runs) != 4:
        raise InputError(f"Exactly four runs are required, got {len(runs)}.")
    correlations = [eventwise_correlation(x, y).value for x, y in runs]
    lhs = abs(correlations[0] - correlations[1]) + abs(correlations[2] + correlations[3])
    return float(lhs), EIGHT_SEQUENCE_BOUND


def _all_sequences(n: int) -> np.ndarray:
    """Every +/-1 sequence of length n as the rows of a (2^n, n) array."""
    codes = np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]
    return 1 - 2 * (codes & 1).astype(np.int64)


def sica_exhaustive_max(n: int) -> float:
    """Maximum of the sica_check lhs over all 2^(4n) quadruplets of length n."""
    if not 1 <= n <= 5:
        raise ConfigurationError(f"Exhaustive enumeration supports 1 <= n <= 5, got {n}.")
    sequences = _all_sequences(n)
    sums = sequences @ sequences.T  # sums[i, j] = sum_k s_i[k] s_j[k]
    ab = sums[:, None, :, None]
    ab_prime = sums[:, None, None, :]
    a_prime_b = sums[None, :, :, None]
    a_prime_b_prime = sums[None, :, None, :]
    lhs = np.abs(ab + ab_prime) + np.abs(a_prime_b - a_prime_b_prime)
    return int(lhs.max()) / n


def eight_sequence_exhaustive_max(n: int) -> float:
    """Maximum of the eight_sequence_check lhs over all eight-sequence sets of length n."""
    if not 1 <= n <= 3:
        raise ConfigurationError(f"Exhaustive enumeration supports 1 <= n <= 3, got {n}.")
    sequences = _all_sequences(n)
    # every run independently reaches the same set of product sums
    run_sums = np.unique(sequences @ sequences.T)
    e1 = run_sums[:, None, None, None]
    e2 = run_sums[None, :, None, None]
    e3 = run_sums[None, None, :, None]
    e4 = run_sums[None, None, None, :]
    lhs = np.abs(e1 - e2) + np.abs(e3 + e4)
    return int(lhs.max()) / n


def _random_signs(rng: np.random.Generator, shape) -> np.ndarray:
    return 1 - 2 * rng.integers(0, 2, size=shape, dtype=np.int64)


def sica_fuzz(
    n_trials: int,
    lengths: Sequence = tuple(range(1, 65)),
    seed: int = 0,
    chunk_size: int = 10000,
    progress: bool = False,
) -> FuzzReport:
    """Evaluate sica_check on n_trials random quadruplets with lengths cycling through lengths."""
    if n_trials < 0:
        raise ConfigurationError(f"n_trials must be non-negative, got {n_trials}.")
    lengths = list(lengths)
    if not lengths or min(lengths) < 1:
        raise ConfigurationError(f"lengths must be positive, got {lengths}.")
    n_violations, max_lhs = 0, 0.0
    per_length = {n: 0 for n in lengths}
    for n, _ in zip(cycle(lengths), range(n_trials)):
        per_length[n] += 1
    with tqdm(total=n_trials, desc="sica fuzz", disable=not progress) as bar:
        for n, trials in per_length.items():
            rng = make_rng(seed, n)
            for start in range(0, trials, chunk_size):
                size = min(chunk_size, trials - start)
                a, a_prime, b, b_prime = _random_signs(rng, (4, size, n))
                lhs_sum = np.abs(np.einsum("ij,ij->i", a, b) + np.einsum("ij,ij->i", a, b_prime)) + np.abs(
                    np.einsum("ij,ij->i", a_prime, b) - np.einsum("ij,ij->i", a_prime, b_prime)
                )
                n_violations += int(np.sum(lhs_sum > 2 * n))
                max_lhs = max(max_lhs, float(lhs_sum.max()) / n)
                bar.update(size)
    if n_violations:
        logger.error("sica fuzz found %d violations of the bound 2", n_violations)
    return FuzzReport(n_trials=n_trials, n_violations=n_violations, max_lhs=max_lhs, bound=CHSH_BOUND)


def eight_sequence_fuzz(
    n_trials: int, length: int = 16, seed: int = 0, chunk_size: int = 10000, progress: bool = False
) -> FuzzReport:
    """Evaluate eight_sequence_check on n_trials random eight-sequence sets of one length."""
    if n_trials < 0 or length < 1:
        raise ConfigurationError(f"Require n_trials >= 0 and length >= 1, got {n_trials} and {length}.")
    rng = make_rng(seed, 0)
    n_violations, max_lhs = 0, 0.0
    with tqdm(total=n_trials, desc="eight-sequence fuzz", disable=not progress) as bar:
        for start in range(0, n_trials, chunk_size):
            size = min(chunk_size, n_trials - start)
            x = _random_signs(rng, (4, size, length))
            y = _random_signs(rng, (4, size, length))
            sums = np.einsum("kij,kij->ki", x, y)
            lhs_sum = np.abs(sums[0] - sums[1]) + np.abs(sums[2] + sums[3])
            n_violations += int(np.sum(lhs_sum > 4 * length))
            max_lhs = max(max_lhs, float(lhs_sum.max()) / length)
            bar.update(size)
    return FuzzReport(n_trials=n_trials, n_violations=n_violations, max_lhs=max_lhs, bound=EIGHT_SEQUENCE_BOUND)


# Which Bell-type bound applies to each model: factorizing models obey the CHSH bound, the
# locked-mode double signal the amended bound, and deterministic hidden variables the trivial one.
MODEL_CLASSIFICATION = {
    FURRY: "chsh",
    UNIFORM: "chsh",
    QM_ORACLE: "chsh",
    LOCKED_MODE: "amended",
    BARUT: "trivial",
}


def applicable_bound(model: str, samples_a: Optional[np.ndarray] = None, samples_b: Optional[np.ndarray] = None):
    """
    Bell-type bound applicable to a model.

    For the locked-mode model the amended bound is evaluated on the arm samples when given;
    without samples the arm intensities of the double signal (all 1) are assumed, giving 4.
    """
    if model not in MODEL_CLASSIFICATION:
        raise ConfigurationError(f"Unknown model id '{model}'; expected one of {sorted(MODEL_CLASSIFICATION)}.")
    kind = MODEL_CLASSIFICATION[model]
    if kind == "amended":
        value = amended_bound(samples_a, samples_b) if samples_a is not None else EIGHT_SEQUENCE_BOUND
    elif kind == "trivial":
        value = TRIVIAL_BOUND
    else:
        value = CHSH_BOUND
    return BoundReport(model=model, kind=kind, value=value)


def fit_through_origin(x, y):
    """Least-squares line y = slope * x; returns (slope, r_squared) with the uncentered R^2."""
    x, y = _paired_samples(x, y)
    if not np.any(x):
        raise DegenerateInputError("Cannot fit a line through the origin to all-zero abscissae.")
    (slope,), residuals, _, _ = np.linalg.lstsq(x[:, None], y, rcond=None)
    total = float(y @ y)
    residual = float(residuals[0]) if len(residuals) else float(np.sum((y - slope * x) ** 2))
    r_squared = 1.0 - residual / total if total > 0 else 1.0
    return float(slope), r_squared
