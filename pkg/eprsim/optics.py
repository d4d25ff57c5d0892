"""
Polarizer projection, Malus-law intensities and the closed-form coincidence probabilities of each model.

Angles are in radians. A two-output analyzer at setting theta sends the component along
u(theta) = (cos theta, sin theta) to the +1 channel and the orthogonal component along
u(theta + pi/2) to the -1 channel.
"""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .exceptions import ConfigurationError, InputError

LOCKED_MODE = "locked-mode"
FURRY = "furry"
BARUT = "barut"
QM_ORACLE = "qm-oracle"
UNIFORM = "uniform"
MODEL_IDS = (LOCKED_MODE, FURRY, BARUT, QM_ORACLE, UNIFORM)
POLARIZATION_MODELS = (LOCKED_MODE, FURRY, QM_ORACLE, UNIFORM)

MIN_QUADRATURE_NODES = 16


@dataclass(frozen=True)
class FieldVector:
    """Real amplitudes of the horizontal and vertical polarization modes of one arm's signal."""

    h: float
    v: float

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.v], dtype=float)

    @property
    def intensity(self) -> float:
        return self.h * self.h + self.v * self.v

    @property
    def angle(self) -> float:
        """Polarization angle folded into [0, pi)."""
        return float(np.mod(np.arctan2(self.v, self.h), np.pi))


@dataclass(frozen=True)
class PolarizerMatrix:
    m: np.ndarray
    theta: float

    def __matmul__(self, f: FieldVector) -> FieldVector:
        h, v = self.m @ f.as_array()
        return FieldVector(float(h), float(v))


@dataclass(frozen=True)
class ChannelIntensities:
    i_plus: float
    i_minus: float

    @property
    def total(self) -> float:
        return self.i_plus + self.i_minus


@dataclass(frozen=True)
class CoincidenceProbabilities:
    """Joint probabilities of the (+,+), (-,-), (+,-) and (-,+) channel pairs for one setting pair."""

    pp: float
    mm: float
    pm: float
    mp: float

    def as_array(self) -> np.ndarray:
        return np.array([self.pp, self.mm, self.pm, self.mp], dtype=float)

    @property
    def total(self) -> float:
        return self.pp + self.mm + self.pm + self.mp

    def normalized(self) -> "CoincidenceProbabilities":
        total = self.total
        if total <= 0:
            raise InputError("Cannot normalize coincidence probabilities with a non-positive total.")
        return CoincidenceProbabilities(self.pp / total, self.mm / total, self.pm / total, self.mp / total)

    @property
    def correlation(self) -> float:
        return (self.pp + self.mm - self.pm - self.mp) / self.total


def _check_finite(*angles):
    for angle in angles:
        if not np.all(np.isfinite(angle)):
            raise InputError(f"Angles must be finite, got {angle}.")


def analyzer_axes(theta):
    """Return the (+1 channel, -1 channel) unit axes of an analyzer at theta; broadcasts over arrays."""
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([c, s], axis=-1), np.stack([-s, c], axis=-1)


def polarizer_matrix(theta: float) -> PolarizerMatrix:
    """Projection matrix [[cos^2, cos sin], [sin cos, sin^2]] of a polarizer at theta."""
    _check_finite(theta)
    c, s = np.cos(theta), np.sin(theta)
    m = np.array([[c * c, c * s], [s * c, s * s]])
    m.setflags(write=False)
    return PolarizerMatrix(m=m, theta=float(theta))


def project(p: PolarizerMatrix, f: FieldVector):
    """
    Pass a field through a two-output analyzer.

    Returns the field transmitted into the +1 channel and the intensities of both channels;
    the -1 channel receives the orthogonal complement of the incident intensity.
    """
    passed = p @ f
    i_plus = passed.intensity
    i_minus = max(f.intensity - i_plus, 0.0)
    return passed, ChannelIntensities(i_plus=i_plus, i_minus=i_minus)


def project_fields(theta: float, fields: np.ndarray):
    """Vectorized project for an (n, 2) array of fields; returns (i_plus, i_minus) arrays."""
    _check_finite(theta)
    fields = np.asarray(fields, dtype=float)
    u_plus, _ = analyzer_axes(theta)
    i_plus = (fields @ u_plus) ** 2
    i_minus = np.maximum(np.einsum("ij,ij->i", fields, fields) - i_plus, 0.0)
    return i_plus, i_minus


def locked_partner(left: np.ndarray, right: np.ndarray):
    """
    Return the partner configuration locked to (left, right) in the double signal.

    The partner is the other cascade stage: both arms rotated by pi/2, which maps the n=0
    configuration onto the n=1 configuration and back (up to an overall sign on each arm).
    """
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    rotate = np.array([[0.0, -1.0], [1.0, 0.0]])
    return left @ rotate.T, right @ rotate.T


def coherence_tensor(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Coherence tensor left (x) right + left' (x) right' of a locked-mode double signal; shape (..., 2, 2)."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    partner_left, partner_right = locked_partner(left, right)
    return np.einsum("...i,...j->...ij", left, right) + np.einsum("...i,...j->...ij", partner_left, partner_right)


def joint_probabilities(theta1: float, theta2: float, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """
    Per-emission coincidence probabilities from the fourth-order intensity of a locked-mode double signal.

    Returns an (n, 4) array with columns (pp, mm, pm, mp), each row normalized over the four
    channel pairs.
    """
    _check_finite(theta1, theta2)
    tensor = coherence_tensor(np.atleast_2d(left), np.atleast_2d(right))
    axes_a = analyzer_axes(theta1)
    axes_b = analyzer_axes(theta2)
    amplitudes = [
        np.einsum("i,nij,j->n", axes_a[ia], tensor, axes_b[ib]) for ia, ib in ((0, 0), (1, 1), (0, 1), (1, 0))
    ]
    intensities = np.stack(amplitudes, axis=-1) ** 2
    return intensities / intensities.sum(axis=-1, keepdims=True)


def factorized_probabilities(i_plus_a, i_minus_a, i_plus_b, i_minus_b) -> np.ndarray:
    """Coincidence probabilities of statistically independent arms; (n, 4) array (pp, mm, pm, mp)."""
    total_a = np.asarray(i_plus_a) + np.asarray(i_minus_a)
    total_b = np.asarray(i_plus_b) + np.asarray(i_minus_b)
    pa, ma = np.asarray(i_plus_a) / total_a, np.asarray(i_minus_a) / total_a
    pb, mb = np.asarray(i_plus_b) / total_b, np.asarray(i_minus_b) / total_b
    return np.stack([pa * pb, ma * mb, pa * mb, ma * pb], axis=-1)


def locked_mode_joint_amplitude(nu, theta):
    """Joint (+,+) amplitude cos(nu) sin(nu + theta) - sin(nu) cos(nu + theta) of a frame rotated by nu."""
    return np.cos(nu) * np.sin(nu + theta) - np.sin(nu) * np.cos(nu + theta)


def analytic_locked_mode(theta1: float, theta2: float) -> CoincidenceProbabilities:
    """P(+,+) = P(-,-) = sin^2(theta)/2 and P(+,-) = P(-,+) = cos^2(theta)/2 with theta = theta1 - theta2."""
    _check_finite(theta1, theta2)
    theta = theta1 - theta2
    same = 0.5 * np.sin(theta) ** 2
    crossed = 0.5 * np.cos(theta) ** 2
    return CoincidenceProbabilities(pp=float(same), mm=float(same), pm=float(crossed), mp=float(crossed))


def analytic_furry(theta1: float, theta2: float) -> CoincidenceProbabilities:
    """P(+,+) = P(-,-) = (2 - cos 2theta)/8 and P(+,-) = P(-,+) = (2 + cos 2theta)/8."""
    _check_finite(theta1, theta2)
    c = np.cos(2.0 * (theta1 - theta2))
    same = (2.0 - c) / 8.0
    crossed = (2.0 + c) / 8.0
    return CoincidenceProbabilities(pp=float(same), mm=float(same), pm=float(crossed), mp=float(crossed))


ANALYTIC_CORRELATIONS = {
    LOCKED_MODE: lambda theta: -np.cos(2.0 * theta),
    QM_ORACLE: lambda theta: -np.cos(2.0 * theta),
    FURRY: lambda theta: -np.cos(2.0 * theta) / 3.0,
    BARUT: lambda theta: -np.cos(theta),
    UNIFORM: lambda theta: np.zeros_like(np.asarray(theta, dtype=float)),
}


def correlation_function(model: str):
    """Vectorized closed-form correlation of a model as a function of the relative angle."""
    if model not in ANALYTIC_CORRELATIONS:
        raise ConfigurationError(f"Unknown model id '{model}'; expected one of {MODEL_IDS}.")
    return ANALYTIC_CORRELATIONS[model]


def analytic_correlation(model: str, theta: float) -> float:
    """Closed-form correlation of a model at relative angle theta."""
    _check_finite(theta)
    return float(correlation_function(model)(theta))


def barut_quadrature(theta: float, n_nodes: int = 256) -> float:
    """
    Normalized correlation of the Barut spin model evaluated by quadrature over the sphere.

    A = S.a and B = -S.b with S uniform on the unit sphere, a along z and b at angle theta in
    the x-z plane. The polar angle uses composite Simpson with the sin(gamma) weight; the azimuth
    uses the uniform periodic rule, exact for the trigonometric integrands involved.
    """
    _check_finite(theta)
    if n_nodes < MIN_QUADRATURE_NODES:
        raise ConfigurationError(f"barut_quadrature needs at least {MIN_QUADRATURE_NODES} nodes, got {n_nodes}.")
    n_gamma = 2 * (n_nodes // 2) + 1
    gamma = np.linspace(0.0, np.pi, n_gamma)
    phi = np.linspace(0.0, 2.0 * np.pi, n_nodes, endpoint=False)
    g, f = np.meshgrid(gamma, phi, indexing="ij")

    s = np.stack([np.sin(g) * np.cos(f), np.sin(g) * np.sin(f), np.cos(g)], axis=-1)
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([np.sin(theta), 0.0, np.cos(theta)])
    values_a = s @ a
    values_b = -(s @ b)

    def mean(values):
        # average over the azimuth, then sin-weighted Simpson in gamma
        weighted = values.mean(axis=1) * np.sin(gamma)
        return simpson(weighted, x=gamma) / 2.0

    mean_ab = mean(values_a * values_b)
    mean_a, mean_b = mean(values_a), mean(values_b)
    denominator = np.sqrt(mean(values_a ** 2) * mean(values_b ** 2))
    return float((mean_ab - mean_a * mean_b) / denominator)
