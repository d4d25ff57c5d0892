"""
Autocorrelations of piecewise-constant (dichotomic) functions and their comparison with harmonics.

All integrals of piecewise-constant integrands are evaluated exactly from overlap lengths:
the breakpoints of both factors are merged and each constant piece contributes its length
times its value.
"""
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd

from .exceptions import ConfigurationError, InputError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi
MIN_QUAD = 1024
MIN_HARMONIC_GRID = 64


@dataclass(frozen=True)
class StepFunction:
    """
    Periodic piecewise-constant function.

    values[k] holds on [switch_points[k], switch_points[k + 1]); the last value wraps around
    through the period end onto [0, switch_points[0]). With no switch points the function is
    the constant values[0].
    """

    switch_points: np.ndarray
    values: np.ndarray
    period: float = TWO_PI

    def __post_init__(self):
        switch_points = np.asarray(self.switch_points, dtype=float).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if not self.period > 0:
            raise InputError(f"period must be positive, got {self.period}.")
        if len(switch_points) == 0:
            if len(values) != 1:
                raise InputError("A step function without switch points takes exactly one value.")
        else:
            if len(values) != len(switch_points):
                raise InputError("A step function needs one value per switch point.")
            if np.any(np.diff(switch_points) <= 0):
                raise InputError("Switch points must be strictly ascending.")
            if switch_points[0] < 0 or switch_points[-1] >= self.period:
                raise InputError(f"Switch points must lie in [0, {self.period}).")
            if np.any(values == np.roll(values, 1)):
                raise InputError("Consecutive values of a step function must differ, including across the wrap.")
        switch_points.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "switch_points", switch_points)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        x = np.mod(np.asarray(x, dtype=float), self.period)
        if len(self.switch_points) == 0:
            return np.full(x.shape, self.values[0])
        # index -1 selects the last value, which wraps onto [0, switch_points[0])
        return self.values[np.searchsorted(self.switch_points, x, side="right") - 1]

    def shifted(self, theta: float) -> "StepFunction":
        """The function x -> p(x - theta)."""
        if len(self.switch_points) == 0:
            return self
        points = np.mod(self.switch_points + theta, self.period)
        points[points >= self.period] = 0.0
        order = np.argsort(points, kind="stable")
        return StepFunction(points[order], self.values[order], self.period)


@dataclass(frozen=True)
class AutocorrelationCurve:
    theta: np.ndarray
    value: np.ndarray

    def __iter__(self):
        return iter(zip(self.theta.tolist(), self.value.tolist()))

    def __len__(self):
        return len(self.theta)

    def to_dataframe(self, anticorrelated: bool = False) -> pd.DataFrame:
        """Columns theta, autocorr, harmonic_ref, deviation for plotting."""
        compared = -self.value if anticorrelated else self.value
        reference = -np.cos(2.0 * self.theta)
        return pd.DataFrame(
            dict(theta=self.theta, autocorr=self.value, harmonic_ref=reference, deviation=np.abs(compared - reference))
        )


@dataclass(frozen=True)
class HarmonicArgumentReport:
    threshold_x: float
    t: np.ndarray
    rhs: np.ndarray
    max_abs_dev: float
    argmax: float
    mismatch_measure: float


def overlap_integral(f: StepFunction, g: StepFunction, lower: float, upper: float) -> float:
    """Exact integral of f(x) g(x) over [lower, upper]."""
    breakpoints = [lower, upper]
    for p in (f, g):
        if len(p.switch_points):
            k = np.arange(np.floor((lower - p.switch_points[-1]) / p.period), np.ceil(upper / p.period) + 1)
            candidates = (p.switch_points[None, :] + p.period * k[:, None]).ravel()
            breakpoints.extend(candidates[(candidates > lower) & (candidates < upper)])
    edges = np.unique(breakpoints)
    midpoints = 0.5 * (edges[1:] + edges[:-1])
    return float(np.sum(np.diff(edges) * f(midpoints) * g(midpoints)))


def shifted_autocorrelation(
    p: StepFunction, theta_grid: Sequence[float], n_quad: int = MIN_QUAD, method: str = "exact"
) -> AutocorrelationCurve:
    """
    (1/period) * integral over one period of p(x - theta) p(x), for every theta in theta_grid.

    method="exact" merges the breakpoints of both factors; method="sampled" is a midpoint
    rule on n_quad nodes, kept as an independent cross-check of the exact evaluation.
    """
    theta_grid = np.asarray(theta_grid, dtype=float).reshape(-1)
    if len(theta_grid) == 0:
        raise InputError("theta_grid is empty.")
    if not np.all(np.isfinite(theta_grid)):
        raise InputError("theta_grid contains non-finite angles.")
    if n_quad < MIN_QUAD:
        raise ConfigurationError(f"n_quad must be at least {MIN_QUAD}, got {n_quad}.")
    if method == "exact":
        values = [overlap_integral(p.shifted(theta), p, 0.0, p.period) / p.period for theta in theta_grid]
    elif method == "sampled":
        x = (np.arange(n_quad) + 0.5) * p.period / n_quad
        values = [float(np.mean(p(x - theta) * p(x))) for theta in theta_grid]
    else:
        raise ConfigurationError(f"Unknown integration method '{method}'; use 'exact' or 'sampled'.")
    return AutocorrelationCurve(theta=theta_grid, value=np.asarray(values))


def _as_curve(corr) -> AutocorrelationCurve:
    if isinstance(corr, AutocorrelationCurve):
        return corr
    pairs = np.asarray(list(corr), dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise InputError("corr must be a sequence of (theta, value) pairs.")
    return AutocorrelationCurve(theta=pairs[:, 0], value=pairs[:, 1])


def harmonic_deviation(corr, anticorrelated: bool = False):
    """
    Maximum of |value(theta) - (-cos 2 theta)| over the grid and where it occurs.

    With anticorrelated=True the curve is taken as the autocorrelation of a partner that
    reports -p, so -value is compared instead. The grid must hold at least 64 points
    spanning [0, pi]. Returns (max_abs_dev, argmax).
    """
    curve = _as_curve(corr)
    n = len(curve)
    tolerance = TWO_PI / max(n, 1)
    if n < MIN_HARMONIC_GRID or curve.theta.min() > tolerance or curve.theta.max() < np.pi - tolerance:
        raise InputError(f"The grid must hold at least {MIN_HARMONIC_GRID} points covering [0, pi].")
    compared = -curve.value if anticorrelated else curve.value
    deviation = np.abs(compared + np.cos(2.0 * curve.theta))
    index = int(np.argmax(deviation))
    return float(deviation[index]), float(curve.theta[index])


def autocorrelation_kinks(p: StepFunction) -> np.ndarray:
    """Lags in [0, period) where the autocorrelation of p may change slope: all switch-point differences."""
    if len(p.switch_points) == 0:
        return np.empty(0)
    differences = p.switch_points[:, None] - p.switch_points[None, :]
    return np.unique(np.mod(differences, p.period))


def is_piecewise_linear(curve, kinks: Sequence[float], period: float = TWO_PI, tol: float = 1e-9) -> bool:
    """
    True when second finite differences on a uniform grid vanish wherever the three-point
    stencil contains no kink.
    """
    curve = _as_curve(curve)
    if len(curve) < 3:
        raise InputError("At least three grid points are required.")
    steps = np.diff(curve.theta)
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-9, atol=1e-12):
        raise InputError("is_piecewise_linear needs a uniform grid.")
    second = curve.value[2:] - 2.0 * curve.value[1:-1] + curve.value[:-2]
    lo, hi = curve.theta[:-2], curve.theta[2:]
    kinks = np.asarray(kinks, dtype=float)
    # a kink at lag k also appears at k + m * period
    shifts = np.arange(np.floor(lo.min() / period) - 1, np.ceil(hi.max() / period) + 2) * period
    all_kinks = (kinks[:, None] + shifts[None, :]).ravel()
    margin = 1e-9 * max(1.0, abs(h))
    clean = np.array([not np.any((all_kinks >= a - margin) & (all_kinks <= b + margin)) for a, b in zip(lo, hi)])
    return bool(np.all(np.abs(second[clean]) <= tol))


def random_step_function(rng: np.random.Generator, n_switches: int, period: float = TWO_PI) -> StepFunction:
    """+/-1 step function with n_switches uniformly random switch points; n_switches must be even and positive."""
    if n_switches < 2 or n_switches % 2:
        raise ConfigurationError(f"A +/-1 step function needs an even, positive number of switches, got {n_switches}.")
    points = np.sort(rng.uniform(0.0, period, size=n_switches))
    if np.any(np.diff(points) <= 0):
        return random_step_function(rng, n_switches, period)
    start = 1.0 if rng.random() < 0.5 else -1.0
    values = start * (1 - 2 * (np.arange(n_switches) % 2))
    return StepFunction(points, values, period)


def square_wave(n_cycles: int = 2, period: float = TWO_PI) -> StepFunction:
    """Symmetric +/-1 square wave with n_cycles full cycles per period, starting at +1 at x = 0."""
    if n_cycles < 1:
        raise ConfigurationError(f"n_cycles must be positive, got {n_cycles}.")
    n_switches = 2 * n_cycles
    points = np.arange(n_switches) * period / n_switches
    values = 1.0 - 2.0 * (np.arange(n_switches) % 2)
    return StepFunction(points, values, period)


def _threshold_integral(s: float, threshold_x: float, low: float, high: float) -> float:
    """Exact integral over [-pi, pi] of D(s - x) D(x - threshold_x) with D(y) = high if y > 0 else low."""
    edges = np.unique(np.clip([-np.pi, s, threshold_x, np.pi], -np.pi, np.pi))
    midpoints = 0.5 * (edges[1:] + edges[:-1])
    first = np.where(s - midpoints > 0, high, low)
    second = np.where(midpoints - threshold_x > 0, high, low)
    return float(np.sum(np.diff(edges) * first * second))


def harmonic_argument_check(threshold_x: float, t_grid: Sequence[float], levels=(-1.0, 1.0)) -> HarmonicArgumentReport:
    """
    Test whether a dichotomic function of a harmonic argument reproduces sin t.

    Evaluates the integral over [-pi, pi] of D(sin t - x) D(x - threshold_x) dx exactly at each t and
    reports its largest deviation from sin t. Differentiating the would-be identity in t gives
    cos t = cos t D(sin t - threshold_x); mismatch_measure is the grid measure of t where that fails.
    """
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if len(t) < 2:
        raise InputError("t_grid needs at least two points.")
    tolerance = TWO_PI / len(t)
    if t.min() > -np.pi + tolerance or t.max() < np.pi - tolerance:
        raise InputError("t_grid must cover [-pi, pi].")
    low, high = (float(level) for level in levels)
    rhs = np.array([_threshold_integral(np.sin(ti), threshold_x, low, high) for ti in t])
    deviation = np.abs(rhs - np.sin(t))
    index = int(np.argmax(deviation))

    derivative_sign = np.where(np.sin(t) - threshold_x > 0, high, low)
    mismatch = np.abs(np.cos(t) - np.cos(t) * derivative_sign) > 1e-12
    order = np.argsort(t)
    cell = np.gradient(t[order])
    mismatch_measure = float(np.sum(cell[mismatch[order]]))
    logger.debug("threshold %g: max deviation %g at t=%g", threshold_x, deviation[index], t[index])
    return HarmonicArgumentReport(
        threshold_x=float(threshold_x),
        t=t,
        rhs=rhs,
        max_abs_dev=float(deviation[index]),
        argmax=float(t[index]),
        mismatch_measure=mismatch_measure,
    )
