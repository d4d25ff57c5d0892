"""Autocorrelations of random dichotomic functions compared with the harmonic -cos(2 theta)."""
import logging

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..analysis import (
    autocorrelation_kinks,
    harmonic_argument_check,
    harmonic_deviation,
    is_piecewise_linear,
    random_step_function,
    shifted_autocorrelation,
    square_wave,
)
from ..baseexperiment import BaseExperiment, ExperimentResult
from ..utils.random import make_rng

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["function", "n_switches", "max_abs_dev", "argmax", "piecewise_linear"]


class DichotomicDemoExperiment(BaseExperiment):
    """
    Draw n_functions random +/-1 step functions, evaluate their shifted autocorrelation on a
    uniform grid over [0, pi], and check that each is piecewise linear and stays away from the
    harmonic. The partner station is taken to report -p, so -autocorrelation is compared.
    """

    name = "dichotomic-demo"
    default_n_events = 1

    def run_experiment(
        self,
        n_functions: int = 100,
        max_switches: int = 16,
        n_grid: int = 721,
        n_quad: int = 1024,
        threshold_x: float = 0.0,
    ):
        rng = make_rng(self.seed, 0)
        theta = np.linspace(0.0, np.pi, n_grid)
        functions = [("square-wave", square_wave())]
        for k in range(n_functions):
            n_switches = 2 * int(rng.integers(1, max_switches // 2 + 1))
            functions.append((f"random-{k}", random_step_function(rng, n_switches)))

        rows = []
        square_curve = None
        for label, p in tqdm(functions, desc="dichotomic functions", disable=not self.progress):
            curve = shifted_autocorrelation(p, theta, n_quad=n_quad)
            max_abs_dev, argmax = harmonic_deviation(curve, anticorrelated=True)
            linear = is_piecewise_linear(curve, autocorrelation_kinks(p), period=p.period)
            rows.append(
                dict(
                    function=label,
                    n_switches=len(p.switch_points),
                    max_abs_dev=max_abs_dev,
                    argmax=argmax,
                    piecewise_linear=linear,
                )
            )
            if square_curve is None:
                square_curve = curve
        table = pd.DataFrame(rows, columns=TABLE_COLUMNS)
        random_rows = table.iloc[1:]

        report = harmonic_argument_check(threshold_x, np.linspace(-np.pi, np.pi, n_grid))
        square_values = shifted_autocorrelation(square_wave(), [0.0, np.pi / 4, np.pi / 2]).value
        scalars = dict(
            n_functions=n_functions,
            all_piecewise_linear=bool(table["piecewise_linear"].all()),
            min_deviation=float(random_rows["max_abs_dev"].min()) if len(random_rows) else None,
            square_wave_deviation=float(table["max_abs_dev"].iloc[0]),
            square_wave_autocorrelation=square_values.tolist(),
            harmonic_argument_max_deviation=report.max_abs_dev,
            harmonic_argument_argmax=report.argmax,
            harmonic_argument_mismatch_measure=report.mismatch_measure,
        )
        logger.info("dichotomic demo: min deviation %s over %d functions", scalars["min_deviation"], n_functions)
        extra_tables = {"square_wave": square_curve.to_dataframe(anticorrelated=True)}
        return ExperimentResult(table=table, scalars=scalars, extra_tables=extra_tables)
