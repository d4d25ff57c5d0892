import numpy as np
import pandas as pd
import pytest
from parameterized import parameterized

from eprsim.exceptions import ConfigurationError
from eprsim.simulation import (
    CANONICAL_ESTIMATOR,
    DOUBLE_MEASUREMENT,
    FOUR_CHANNEL,
    NORMALIZED,
    SIGN,
    analytic_table,
    correlation_sweep,
    deviation_report,
    simulate,
    simulate_setting_pair,
    simulate_spin_correlation,
)
from eprsim.statistics import eventwise_correlation
from eprsim.utils.io import RESULT_COLUMNS

sweep_angles = (np.arange(16) * np.pi / 16).tolist()


def test_locked_mode_parallel_analyzers_give_minus_one():
    result = simulate_setting_pair("locked-mode", 0.0, 0.0, 10000, seed=1)
    assert result.estimates[FOUR_CHANNEL].value == -1.0
    assert result.estimates[FOUR_CHANNEL].n == 10000
    assert result.canonical is result.estimates[FOUR_CHANNEL]


@parameterized.expand([(0.0,), (np.pi / 8,), (np.pi / 3,), (0.9,)])
def test_double_measurement_is_exact(theta):
    result = simulate_setting_pair("locked-mode", theta, 0.0, 1000, seed=2)
    assert result.estimates[DOUBLE_MEASUREMENT].value == pytest.approx(-np.cos(2 * theta), abs=1e-12)
    single = simulate_setting_pair("locked-mode", theta, 0.0, 1000, seed=2, single_mode=True)
    assert single.estimates[DOUBLE_MEASUREMENT].value == pytest.approx(np.sin(theta) ** 2 - 1.0, abs=1e-12)


def test_furry_parallel_analyzers_give_minus_a_third():
    result = simulate_setting_pair("furry", 0.0, 0.0, 1000000, seed=3)
    assert result.canonical is result.estimates[NORMALIZED]
    assert result.canonical.value == pytest.approx(-1.0 / 3.0, abs=0.005)
    # coincidence counting on the same emissions sees half the visibility
    assert result.estimates[FOUR_CHANNEL].value == pytest.approx(-0.5, abs=0.005)


def test_uniform_source_is_uncorrelated():
    result = simulate_setting_pair("uniform", 0.0, 0.0, 200000, seed=4)
    estimate = result.canonical
    assert abs(estimate.value) < 4 * estimate.std_err


def test_fair_sampling_keeps_the_correlation():
    theta = np.pi / 6
    result = simulate_setting_pair("locked-mode", theta, 0.0, 200000, seed=5, efficiency=0.3)
    estimate = result.estimates[FOUR_CHANNEL]
    assert estimate.n == pytest.approx(200000 * 0.09, rel=0.05)
    assert abs(estimate.value + np.cos(2 * theta)) < 4 * estimate.std_err


def test_coincident_sequences_reproduce_the_four_channel_estimate():
    result = simulate_setting_pair("locked-mode", 0.4, 0.1, 5000, seed=6, keep_sequences=True)
    x, y = result.sequences
    assert eventwise_correlation(x, y).value == pytest.approx(result.estimates[FOUR_CHANNEL].value)


def test_results_are_reproducible():
    first = simulate_setting_pair("furry", 0.3, 0.0, 2000, seed=7, jitter=1e-7, dark_count_rate=10.0)
    second = simulate_setting_pair("furry", 0.3, 0.0, 2000, seed=7, jitter=1e-7, dark_count_rate=10.0)
    assert first == second
    third = simulate_setting_pair("furry", 0.3, 0.0, 2000, seed=8, jitter=1e-7, dark_count_rate=10.0)
    assert third.counts != first.counts


def test_setting_pair_rows():
    result = simulate_setting_pair("locked-mode", 0.5, 0.2, 1000, seed=9)
    assert result.theta == pytest.approx(0.3)
    rows = pd.DataFrame(result.to_rows())
    assert rows.columns.tolist() == RESULT_COLUMNS
    assert set(rows["estimator"]) == {FOUR_CHANNEL, NORMALIZED, DOUBLE_MEASUREMENT}


def test_invalid_pipeline_configuration():
    with pytest.raises(ConfigurationError):
        simulate_setting_pair("locked-mode", 0.0, 0.0, 0, seed=0)
    with pytest.raises(ConfigurationError):
        simulate_setting_pair("barut", 0.0, 0.0, 10, seed=0)
    with pytest.raises(ConfigurationError):
        simulate_spin_correlation(0.0, 1, seed=0)


@parameterized.expand([(0.0,), (np.pi / 4,), (np.pi / 2,), (2.5,)])
def test_barut_monte_carlo(theta):
    result = simulate("barut", theta, 0.0, 200000, seed=10)
    estimate = result.canonical
    assert abs(estimate.value + np.cos(theta)) < 4 * estimate.std_err + 1e-3
    # outcome signs of exactly anticorrelated spins
    assert result.estimates[SIGN].value == pytest.approx(2 * theta / np.pi - 1, abs=0.01)


def test_locked_mode_sweep_follows_the_harmonic():
    table = correlation_sweep("locked-mode", sweep_angles, 100000, seed=11)
    assert table.columns.tolist() == RESULT_COLUMNS
    assert len(table) == 3 * len(sweep_angles)
    report = deviation_report(table, "locked-mode")
    assert report["n_rows"] == len(sweep_angles)
    # 16 angles: a 4 sigma gate keeps the family-wise false alarm rate below 0.1%
    assert report["max_z"] < 4.0


def test_furry_sweep_follows_a_third_of_the_harmonic():
    table = correlation_sweep("furry", sweep_angles[::4], 200000, seed=12)
    report = deviation_report(table, "furry")
    assert report["max_abs_deviation"] < 0.01


def test_deviation_report_against_the_wrong_oracle():
    table = correlation_sweep("furry", [0.0], 20000, seed=13)
    report = deviation_report(table, "qm-oracle")
    assert report["max_abs_deviation"] == pytest.approx(2.0 / 3.0, abs=0.02)
    assert report["argmax_theta"] == 0.0


def test_deviation_report_of_an_analytic_table():
    table = analytic_table("barut", [0.0, 1.0])
    assert table["estimator"].tolist() == ["analytic", "analytic"]
    report = deviation_report(table, "barut")
    assert report["max_abs_deviation"] == 0.0
    assert report["max_z"] == 0.0
    assert deviation_report(table, "locked-mode")["max_z"] == np.inf


def test_deviation_report_validation():
    with pytest.raises(ConfigurationError):
        deviation_report(pd.DataFrame(dict(theta=[0.0])), "barut")
    with pytest.raises(ConfigurationError):
        deviation_report(pd.DataFrame(columns=RESULT_COLUMNS), "barut")
    with pytest.raises(ConfigurationError):
        deviation_report(analytic_table("barut", [0.0]), "bohm")


def test_canonical_estimators():
    assert CANONICAL_ESTIMATOR == {
        "locked-mode": FOUR_CHANNEL,
        "furry": NORMALIZED,
        "uniform": FOUR_CHANNEL,
        "barut": NORMALIZED,
    }


def test_missing_coincidences_skip_the_four_channel_estimate():
    with pytest.warns(UserWarning, match="four-channel"):
        result = simulate_setting_pair("locked-mode", 0.0, 0.0, 1000, seed=14, jitter=1e-7, window=0.0)
    assert FOUR_CHANNEL not in result.estimates
    assert DOUBLE_MEASUREMENT in result.estimates
