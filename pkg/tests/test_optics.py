import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from parameterized import parameterized

from eprsim.exceptions import ConfigurationError, InputError
from eprsim.optics import (
    BARUT,
    FURRY,
    LOCKED_MODE,
    MODEL_IDS,
    QM_ORACLE,
    UNIFORM,
    CoincidenceProbabilities,
    FieldVector,
    analytic_correlation,
    analytic_furry,
    analytic_locked_mode,
    barut_quadrature,
    coherence_tensor,
    correlation_function,
    joint_probabilities,
    locked_mode_joint_amplitude,
    locked_partner,
    polarizer_matrix,
    project,
    project_fields,
)
from eprsim.sources.lockedmode.lockedmodesource import LEFT_MODES, RIGHT_MODES

angles = st.floats(min_value=-2 * np.pi, max_value=2 * np.pi, allow_nan=False)


@given(theta=angles, h=st.floats(-10, 10), v=st.floats(-10, 10))
def test_malus_conservation(theta, h, v):
    field = FieldVector(h, v)
    passed, intensities = project(polarizer_matrix(theta), field)
    assert intensities.i_plus >= 0 and intensities.i_minus >= 0
    assert intensities.total == pytest.approx(field.intensity, rel=1e-9, abs=1e-9)
    assert passed.intensity == pytest.approx(intensities.i_plus, rel=1e-9, abs=1e-9)


@given(theta=angles, nu=angles)
def test_malus_law(theta, nu):
    _, intensities = project(polarizer_matrix(theta), FieldVector(np.cos(nu), np.sin(nu)))
    assert intensities.i_plus == pytest.approx(np.cos(theta - nu) ** 2, abs=1e-12)


def test_polarizer_matrix_is_a_read_only_projector():
    p = polarizer_matrix(0.3)
    np.testing.assert_allclose(p.m @ p.m, p.m, atol=1e-15)
    with pytest.raises(ValueError):
        p.m[0, 0] = 2.0


@parameterized.expand(
    [
        ("horizontal", 0.0, [[1.0, 0.0], [0.0, 0.0]]),
        ("vertical", np.pi / 2, [[0.0, 0.0], [0.0, 1.0]]),
        ("diagonal", np.pi / 4, [[0.5, 0.5], [0.5, 0.5]]),
    ]
)
def test_polarizer_matrix_examples(_, theta, expected):
    np.testing.assert_allclose(polarizer_matrix(theta).m, expected, atol=1e-15)


def test_polarizer_matrix_is_a_symmetric_unit_trace_projector():
    rng = np.random.default_rng(11)
    for theta in rng.uniform(-4 * np.pi, 4 * np.pi, size=1000):
        m = polarizer_matrix(theta).m
        np.testing.assert_array_equal(m, m.T)
        assert np.trace(m) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(m @ m, m, atol=1e-12)


def test_project_fields_matches_project():
    rng = np.random.default_rng(0)
    fields = rng.normal(size=(50, 2))
    i_plus, i_minus = project_fields(1.1, fields)
    for field, expected_plus, expected_minus in zip(fields, i_plus, i_minus):
        _, intensities = project(polarizer_matrix(1.1), FieldVector(*field))
        assert intensities.i_plus == pytest.approx(expected_plus)
        assert intensities.i_minus == pytest.approx(expected_minus, abs=1e-12)


def test_non_finite_angles_are_rejected():
    with pytest.raises(InputError):
        polarizer_matrix(np.nan)
    with pytest.raises(InputError):
        project_fields(np.inf, np.ones((2, 2)))
    with pytest.raises(InputError):
        analytic_correlation(LOCKED_MODE, np.nan)


def test_field_vector_angle():
    assert FieldVector(0.0, 1.0).angle == pytest.approx(np.pi / 2)
    assert FieldVector(-1.0, 0.0).angle == pytest.approx(0.0)


def test_locked_partner_swaps_the_two_configurations():
    partner_left, partner_right = locked_partner(LEFT_MODES[0], RIGHT_MODES[0])
    np.testing.assert_allclose(np.abs(partner_left), np.abs(LEFT_MODES[1]))
    np.testing.assert_allclose(np.abs(partner_right), np.abs(RIGHT_MODES[1]))


def test_coherence_tensor_is_the_same_for_both_configurations():
    np.testing.assert_allclose(
        coherence_tensor(LEFT_MODES[0], RIGHT_MODES[0]), coherence_tensor(LEFT_MODES[1], RIGHT_MODES[1])
    )


@parameterized.expand([(0.0,), (np.pi / 8,), (np.pi / 4,), (np.pi / 3,), (np.pi / 2,), (2.0,)])
def test_joint_probabilities_match_closed_form(theta):
    expected = analytic_locked_mode(theta, 0.0).as_array()
    for n in (0, 1):
        probabilities = joint_probabilities(theta, 0.0, LEFT_MODES[n], RIGHT_MODES[n])[0]
        np.testing.assert_allclose(probabilities, expected, atol=1e-12)


def test_joint_probabilities_depend_on_the_difference_only():
    left, right = LEFT_MODES, RIGHT_MODES
    np.testing.assert_allclose(
        joint_probabilities(0.9, 0.4, left, right), joint_probabilities(0.5, 0.0, left, right), atol=1e-12
    )


def test_parallel_analyzers_never_give_plus_plus():
    probabilities = analytic_locked_mode(0.7, 0.7)
    assert probabilities.pp == 0.0 and probabilities.mm == 0.0
    assert joint_probabilities(0.0, 0.0, LEFT_MODES, RIGHT_MODES)[:, 0].max() == pytest.approx(0.0, abs=1e-30)


@given(theta1=angles, theta2=angles)
def test_closed_form_probabilities_are_normalized(theta1, theta2):
    for probabilities in (analytic_locked_mode(theta1, theta2), analytic_furry(theta1, theta2)):
        assert probabilities.total == pytest.approx(1.0)
        assert min(probabilities.as_array()) >= 0


@given(theta=angles)
def test_probability_correlations_match_closed_forms(theta):
    assert analytic_locked_mode(theta, 0.0).correlation == pytest.approx(-np.cos(2 * theta), abs=1e-12)
    # coincidence counting on the Furry mixture halves the visibility
    assert analytic_furry(theta, 0.0).correlation == pytest.approx(-np.cos(2 * theta) / 2, abs=1e-12)


@given(theta1=angles, theta2=angles, delta=angles)
def test_closed_form_probabilities_depend_on_the_difference_only(theta1, theta2, delta):
    for analytic in (analytic_locked_mode, analytic_furry):
        np.testing.assert_allclose(
            analytic(theta1 + delta, theta2 + delta).as_array(), analytic(theta1, theta2).as_array(), atol=1e-12
        )


@given(theta=angles)
def test_polarization_correlations_are_even_and_pi_periodic(theta):
    for model in (LOCKED_MODE, FURRY, QM_ORACLE, UNIFORM):
        assert analytic_correlation(model, -theta) == pytest.approx(analytic_correlation(model, theta), abs=1e-12)
        shifted = analytic_correlation(model, theta + np.pi)
        assert shifted == pytest.approx(analytic_correlation(model, theta), abs=1e-12)


def test_furry_plus_plus_minimum_is_one_eighth():
    thetas = np.linspace(0.0, np.pi, 181)
    plus_plus = np.array([analytic_furry(theta, 0.0).pp for theta in thetas])
    assert plus_plus.min() == 0.125
    assert thetas[np.argmin(plus_plus)] == 0.0
    assert plus_plus.max() == pytest.approx(0.375, abs=1e-15)

def test_coincidence_probabilities_normalized():
    probabilities = CoincidenceProbabilities(1.0, 1.0, 2.0, 0.0).normalized()
    assert probabilities.as_array().tolist() == [0.25, 0.25, 0.5, 0.0]
    with pytest.raises(InputError):
        CoincidenceProbabilities(0.0, 0.0, 0.0, 0.0).normalized()


@given(nu=angles, theta=angles)
def test_joint_amplitude_is_rotation_invariant(nu, theta):
    assert locked_mode_joint_amplitude(nu, theta) == pytest.approx(np.sin(theta), abs=1e-9)


@parameterized.expand(
    [
        (LOCKED_MODE, 0.0, -1.0),
        (LOCKED_MODE, np.pi / 4, 0.0),
        (QM_ORACLE, np.pi / 2, 1.0),
        (FURRY, 0.0, -1.0 / 3.0),
        (BARUT, np.pi / 3, -0.5),
        (UNIFORM, 1.2, 0.0),
    ]
)
def test_analytic_correlation(model, theta, expected):
    assert analytic_correlation(model, theta) == pytest.approx(expected, abs=1e-12)


def test_correlation_functions_are_vectorized():
    theta = np.linspace(0.0, np.pi, 7)
    for model in MODEL_IDS:
        assert np.shape(correlation_function(model)(theta)) == theta.shape


def test_unknown_model():
    with pytest.raises(ConfigurationError):
        correlation_function("bohm")


@settings(max_examples=20, deadline=None)
@given(theta=st.floats(0.0, np.pi))
def test_barut_quadrature_matches_closed_form(theta):
    assert barut_quadrature(theta) == pytest.approx(-np.cos(theta), abs=1e-6)


def test_barut_quadrature_needs_enough_nodes():
    with pytest.raises(ConfigurationError):
        barut_quadrature(0.1, n_nodes=8)
