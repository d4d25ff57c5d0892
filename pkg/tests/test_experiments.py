import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from jsonschema import Draft7Validator

from eprsim import ExperimentRunner
from eprsim.baseexperiment import ANGLE_PRESETS, resolve_angles
from eprsim.exceptions import ConfigurationError
from eprsim.experiments import (
    BarutQuadratureExperiment,
    ChshExperiment,
    CorrelationSweepExperiment,
    DichotomicDemoExperiment,
    SicaFuzzExperiment,
    WindowSweepExperiment,
    experiment_classes,
    experiment_list,
)


@pytest.mark.parametrize("experiment", experiment_list)
def test_experiment_source_schema(experiment):
    schema = experiment.get_source_schema()
    Draft7Validator.check_schema(schema)


@pytest.mark.parametrize("experiment", experiment_list)
def test_experiment_options_schema(experiment):
    schema = experiment.get_options_schema()
    Draft7Validator.check_schema(schema)


@pytest.mark.parametrize("experiment", experiment_list)
def test_config_schema(experiment):
    schema = ExperimentRunner.get_config_schema(experiment.name)
    Draft7Validator.check_schema(schema)
    assert experiment.name in schema["properties"]["experiment"]["enum"]


def test_experiment_registry():
    assert sorted(experiment_classes) == sorted(
        ["correlation-sweep", "chsh", "window-sweep", "sica-fuzz", "dichotomic-demo", "barut-quadrature"]
    )


def test_angle_presets():
    assert resolve_angles("chsh-optimal") == [0.0, np.pi / 4, np.pi / 8, 3 * np.pi / 8]
    assert len(resolve_angles("sweep-16")) == 16
    assert resolve_angles("barut-32")[-1] == pytest.approx(np.pi)
    assert ANGLE_PRESETS["optimal"] == ANGLE_PRESETS["chsh-optimal"]
    assert resolve_angles([0, 1]) == [0.0, 1.0]
    with pytest.raises(ConfigurationError):
        resolve_angles("sweep-17")
    with pytest.raises(ConfigurationError):
        resolve_angles([])


@pytest.mark.parametrize(
    "config",
    [
        dict(experiment="chsh", model="locked-mode", n_events=10),
        dict(experiment="bell", seed=1),
        dict(experiment="chsh", seed=-1, model="locked-mode", n_events=10),
        dict(experiment="chsh", seed=1, model="locked-mode", n_events=0),
        dict(experiment="chsh", seed=1, model="bohm", n_events=10),
        dict(experiment="chsh", seed=1, model="locked-mode", n_events=10, bogus=True),
        dict(experiment="chsh", seed=1, model="locked-mode", n_events=10, angles="sweep-17"),
        dict(experiment="window-sweep", seed=1, model="locked-mode", n_events=10, windows="wide"),
    ],
)
def test_invalid_configurations(config):
    with pytest.raises(ConfigurationError):
        ExperimentRunner.validate_config(config)


def test_model_must_suit_the_experiment():
    with pytest.raises(ConfigurationError):
        ExperimentRunner(dict(experiment="window-sweep", seed=1, model="barut", n_events=10))
    with pytest.raises(ConfigurationError):
        ExperimentRunner(dict(experiment="correlation-sweep", seed=1, model="accidentals", n_events=10))
    with pytest.raises(ConfigurationError):
        ExperimentRunner(dict(experiment="correlation-sweep", seed=1, model="furry"))


def test_runner_fills_defaults(tmp_path):
    runner = ExperimentRunner(
        dict(experiment="chsh", seed=3, model="furry", n_events=10, output=str(tmp_path / "chsh.csv"))
    )
    assert runner.config["angles"] == "chsh-optimal"
    assert runner.config["window"] == 1e-6
    assert runner.config["progress"] is False
    assert runner.options["mean_rate"] == 1000.0
    assert runner.summary_path == tmp_path / "chsh.json"


def test_chsh_locked_mode(tmp_path):
    config = dict(experiment="chsh", seed=1, model="locked-mode", n_events=200000, output=str(tmp_path / "chsh.csv"))
    summary = ExperimentRunner(config).run()
    assert summary["chsh_value"] == pytest.approx(2 * np.sqrt(2), abs=0.015)
    assert summary["analytic_chsh_value"] == pytest.approx(2 * np.sqrt(2))
    assert summary["eight_sequence_lhs"] == pytest.approx(summary["chsh_value"])
    assert summary["eight_sequence_bound"] == 4.0
    assert (summary["bound_kind"], summary["bound"], summary["violates_bound"]) == ("amended", 4.0, False)

    table = pd.read_csv(tmp_path / "chsh.csv")
    assert table.columns.tolist() == ["theta", "model", "estimator", "value", "std_err", "n"]
    assert len(table) == 4
    written = json.loads((tmp_path / "chsh.json").read_text())
    assert written["chsh_value"] == pytest.approx(summary["chsh_value"])
    assert written["config"]["seed"] == 1
    assert written["version"] == "0.1.0"
    assert set(written["outputs"]) == {"table"}


def test_chsh_furry_respects_the_bound():
    result = ChshExperiment(seed=2, model="furry", n_events=100000).run_experiment()
    scalars = result.scalars
    assert scalars["estimator"] == "normalized"
    assert scalars["chsh_value"] == pytest.approx(2 * np.sqrt(2) / 3, abs=0.02)
    assert (scalars["bound_kind"], scalars["bound"], scalars["violates_bound"]) == ("chsh", 2.0, False)


def test_chsh_barut_uses_the_trivial_bound():
    result = ChshExperiment(seed=3, model="barut", n_events=200000).run_experiment()
    scalars = result.scalars
    expected = abs(np.cos(3 * np.pi / 8) - np.cos(np.pi / 8)) + 2 * np.cos(np.pi / 8)
    assert scalars["analytic_chsh_value"] == pytest.approx(expected)
    assert scalars["chsh_value"] == pytest.approx(expected, abs=0.02)
    assert scalars["bound_kind"] == "trivial"
    assert scalars["violates_bound"] is False
    assert "eight_sequence_lhs" not in scalars


def test_chsh_needs_four_settings():
    with pytest.raises(ConfigurationError):
        ChshExperiment(seed=1, model="locked-mode", n_events=10).run_experiment(angles=[0.0, 1.0, 2.0])


def test_correlation_sweep_locked_mode():
    result = CorrelationSweepExperiment(seed=4, model="locked-mode", n_events=20000).run_experiment()
    assert result.scalars["n_angles"] == 16
    # max over 16 angles: a 4 sigma gate keeps the family-wise false alarm rate small
    assert result.scalars["max_z"] < 4.0
    assert set(result.table["estimator"]) == {"four-channel", "normalized", "double-measurement"}


def test_correlation_sweep_barut():
    result = CorrelationSweepExperiment(seed=5, model="barut", n_events=50000).run_experiment(
        angles=[0.0, np.pi / 3, 2.0]
    )
    assert result.scalars["max_z"] < 4.0
    assert result.scalars["max_deviation"] < 0.02


def test_window_sweep_accidentals():
    windows = [2.5e-6, 5e-6, 1e-5, 2e-5]
    result = WindowSweepExperiment(seed=6, model="accidentals", n_events=500000).run_experiment(windows=windows)
    scalars = result.scalars
    assert scalars["r_squared"] > 0.99
    assert scalars["slope"] == pytest.approx(2 * 1000.0 ** 2, rel=0.1)
    assert scalars["rate_ratio"] == pytest.approx(scalars["window_ratio"], rel=0.08)
    assert scalars["rate_window_product"] == pytest.approx(0.02)


def test_window_sweep_true_pairs_are_flat():
    result = WindowSweepExperiment(seed=7, model="locked-mode", n_events=100000).run_experiment(
        windows=[9e-7, 2e-6, 4e-6, 9e-6], mean_rate=100.0, jitter=5e-7
    )
    assert result.scalars["relative_variation"] < 0.02
    assert result.scalars["rate_ratio"] == pytest.approx(1.0, abs=0.02)


def test_window_sweep_needs_two_windows():
    with pytest.raises(ConfigurationError):
        WindowSweepExperiment(seed=1, model="accidentals", n_events=10).run_experiment(windows=[1e-6])


def test_sica_fuzz_experiment():
    result = SicaFuzzExperiment(seed=8, n_events=20000).run_experiment(lengths=list(range(1, 9)))
    scalars = result.scalars
    assert scalars["n_violations"] == 0
    assert scalars["eight_sequence_violations"] == 0
    assert scalars["max_lhs"] == 2.0
    assert scalars["exhaustive_max_lhs"] == 2.0
    assert scalars["eight_sequence_exhaustive_max_lhs"] == 4.0
    assert result.table["n_violations"].sum() == 0
    assert SicaFuzzExperiment(seed=8).n_events == 100000


def test_dichotomic_demo():
    result = DichotomicDemoExperiment(seed=9).run_experiment(n_functions=10, n_grid=361)
    scalars = result.scalars
    assert scalars["all_piecewise_linear"]
    assert scalars["min_deviation"] > 0.1
    assert scalars["square_wave_deviation"] == pytest.approx(0.2107, abs=2e-3)
    np.testing.assert_allclose(scalars["square_wave_autocorrelation"], [1.0, 0.0, -1.0], atol=1e-12)
    assert scalars["harmonic_argument_max_deviation"] == pytest.approx(2 * np.pi, abs=1e-9)
    assert scalars["harmonic_argument_mismatch_measure"] == pytest.approx(np.pi, abs=0.05)
    assert len(result.table) == 11
    assert result.extra_tables["square_wave"].columns.tolist() == ["theta", "autocorr", "harmonic_ref", "deviation"]


def test_barut_quadrature_experiment():
    result = BarutQuadratureExperiment(seed=10, model="barut", n_events=50000).run_experiment()
    assert result.scalars["max_quadrature_error"] < 1e-6
    # max over 32 angles
    assert result.scalars["max_z"] < 5.0
    assert len(result.table) == 64


def test_extra_tables_are_written(tmp_path):
    output = tmp_path / "demo" / "dichotomic.csv"
    config = dict(experiment="dichotomic-demo", seed=1, n_functions=2, n_grid=181, output=str(output))
    summary = ExperimentRunner(config).run()
    assert Path(summary["outputs"]["square_wave"]) == tmp_path / "demo" / "dichotomic_square_wave.csv"
    assert (tmp_path / "demo" / "dichotomic_square_wave.csv").is_file()
    assert (tmp_path / "demo" / "dichotomic.json").is_file()


def test_runs_are_reproducible(tmp_path):
    def run(name):
        config = dict(
            experiment="correlation-sweep",
            seed=12,
            model="furry",
            n_events=2000,
            angles=[0.0, 0.5, 1.0],
            jitter=1e-7,
            output=str(tmp_path / name),
        )
        ExperimentRunner(config).run()
        return (tmp_path / name).read_bytes()

    assert run("first.csv") == run("second.csv")
