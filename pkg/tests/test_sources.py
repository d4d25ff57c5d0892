import numpy as np
import pytest
from jsonschema import Draft7Validator
from scipy import stats

from eprsim.basesource import EmissionBatch, PairEmission, SpinEmissionBatch
from eprsim.exceptions import ConfigurationError
from eprsim.sources import (
    BarutSource,
    FurrySource,
    LockedModeSource,
    UniformRandomSource,
    barut_source,
    furry_source,
    locked_mode_source,
    source_classes,
    source_list,
    uniform_random_source,
)
from eprsim.sources.lockedmode.lockedmodesource import LEFT_MODES, RIGHT_MODES


@pytest.mark.parametrize("source", source_list)
def test_source_schema(source):
    schema = source.get_source_schema()
    Draft7Validator.check_schema(schema)
    assert {"seed", "n_events"} <= set(schema["required"])


def test_source_registry():
    assert set(source_classes) == {"locked-mode", "furry", "barut", "uniform"}


@pytest.mark.parametrize("source", [LockedModeSource, FurrySource, UniformRandomSource])
def test_polarization_source_is_reproducible(source):
    first = source(seed=11, n_events=500).emit()
    second = source(seed=11, n_events=500).emit()
    other = source(seed=12, n_events=500).emit()
    np.testing.assert_array_equal(first.left, second.left)
    np.testing.assert_array_equal(first.emit_time, second.emit_time)
    assert not np.array_equal(first.emit_time, other.emit_time)


@pytest.mark.parametrize("source", [LockedModeSource, FurrySource, UniformRandomSource])
def test_emission_batch_layout(source):
    batch = source(seed=3, n_events=200, mean_rate=50.0).emit()
    assert isinstance(batch, EmissionBatch)
    assert len(batch) == 200
    assert batch.left.shape == batch.right.shape == (200, 2)
    assert np.all(np.diff(batch.emit_time) > 0)
    assert batch.duration == batch.emit_time[-1]
    with pytest.raises(ValueError):
        batch.left[0, 0] = 5.0


def test_emission_times_are_poissonian():
    batch = LockedModeSource(seed=1, n_events=200000, mean_rate=1000.0).emit()
    gaps = np.diff(batch.emit_time)
    assert np.mean(gaps) == pytest.approx(1e-3, rel=0.01)
    # exponential gaps have equal mean and standard deviation
    assert np.std(gaps) == pytest.approx(np.mean(gaps), rel=0.02)
    assert stats.kstest(gaps, "expon", args=(0.0, 1e-3)).pvalue > 1e-3


def test_locked_mode_signals():
    batch = locked_mode_source(seed=5, n_events=10000)
    n = batch.hidden.astype(int)
    assert set(np.unique(n)) == {0, 1}
    np.testing.assert_array_equal(batch.left, LEFT_MODES[n])
    np.testing.assert_array_equal(batch.right, RIGHT_MODES[n])
    # orthogonal arms, unit intensity per arm
    assert np.all(np.einsum("ij,ij->i", batch.left, batch.right) == 0)
    assert np.all(np.einsum("ij,ij->i", batch.left, batch.left) == 1)
    assert np.mean(n) == pytest.approx(0.5, abs=0.02)


def test_furry_signals_are_orthogonal():
    batch = furry_source(seed=5, n_events=5000)
    np.testing.assert_allclose(np.einsum("ij,ij->i", batch.left, batch.right), 0.0, atol=1e-15)
    assert np.all((batch.hidden >= 0) & (batch.hidden < np.pi))
    np.testing.assert_allclose(batch.left[:, 0], np.cos(batch.hidden))


def test_uniform_arms_are_independent():
    batch = uniform_random_source(seed=5, n_events=100000)
    angle_a = np.arctan2(batch.left[:, 1], batch.left[:, 0])
    angle_b = np.arctan2(batch.right[:, 1], batch.right[:, 0])
    assert abs(np.corrcoef(np.cos(2 * angle_a), np.cos(2 * angle_b))[0, 1]) < 0.02


def test_barut_spins():
    batch = barut_source(seed=2, n_events=100000)
    assert isinstance(batch, SpinEmissionBatch)
    np.testing.assert_allclose(np.linalg.norm(batch.s1, axis=1), 1.0)
    np.testing.assert_array_equal(batch.s2, -batch.s1)
    # uniform on the sphere: each Cartesian component has mean 0 and second moment 1/3
    np.testing.assert_allclose(batch.s1.mean(axis=0), 0.0, atol=0.01)
    np.testing.assert_allclose((batch.s1 ** 2).mean(axis=0), 1.0 / 3.0, atol=0.01)


def test_iteration_yields_pair_emissions():
    source = LockedModeSource(seed=0, n_events=3)
    emissions = list(source)
    assert len(emissions) == 3
    assert isinstance(emissions[0], PairEmission)
    assert emissions[0].left.intensity == 1.0
    spins = list(BarutSource(seed=0, n_events=2))
    assert spins[0].s1.shape == (3,)


@pytest.mark.parametrize("source_class", source_list)
def test_repeated_emission_replays_the_stream(source_class):
    source = source_class(seed=6, n_events=50)
    first, second = source.emit(), source.emit()
    for name in first.__dataclass_fields__:
        np.testing.assert_array_equal(getattr(first, name), getattr(second, name))


def test_repeated_iteration_replays_the_stream():
    source = FurrySource(seed=6, n_events=20)
    assert list(source) == list(source)


def test_invalid_source_parameters():
    with pytest.raises(ConfigurationError):
        LockedModeSource(seed=0, n_events=10, mean_rate=0.0)
    with pytest.raises(ConfigurationError):
        FurrySource(seed=0, n_events=-1)


def test_empty_source():
    batch = FurrySource(seed=0, n_events=0).emit()
    assert len(batch) == 0
    assert batch.duration == 0.0


def test_barut_polar_angle_follows_the_sine_density():
    batch = barut_source(seed=4, n_events=50000)
    # cos(gamma) is uniform on [-1, 1] for a uniform direction on the sphere
    assert stats.kstest(np.cos(batch.gamma), "uniform", args=(-1.0, 2.0)).pvalue > 1e-3
    assert stats.kstest(batch.phi, "uniform", args=(0.0, 2 * np.pi)).pvalue > 1e-3


def test_hidden_variable_distributions():
    n = locked_mode_source(seed=8, n_events=100000).hidden.astype(int)
    assert stats.chisquare(np.bincount(n, minlength=2)).pvalue > 1e-3
    nu = furry_source(seed=8, n_events=100000).hidden
    assert stats.kstest(nu, "uniform", args=(0.0, np.pi)).pvalue > 1e-3
