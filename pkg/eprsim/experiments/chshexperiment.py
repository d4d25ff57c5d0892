"""CHSH combination of four setting pairs, with the bound that applies to the model."""
import logging

import numpy as np
import pandas as pd

from ..baseexperiment import BaseExperiment, ExperimentResult, resolve_angles
from ..exceptions import ConfigurationError, DegenerateInputError
from ..optics import BARUT, FURRY, LOCKED_MODE, UNIFORM, correlation_function
from ..simulation import CANONICAL_ESTIMATOR, simulate
from ..sources import source_classes
from ..statistics import (
    applicable_bound,
    chsh,
    chsh_from_settings,
    chsh_lattice_max,
    eight_sequence_check,
    trivial_bound_check,
)
from ..utils.io import RESULT_COLUMNS
from ..utils.random import derive_seed

logger = logging.getLogger(__name__)


class ChshExperiment(BaseExperiment):
    """
    Estimate P(a,b), P(a,b'), P(a',b') and P(a',b) from independent runs and combine them.

    angles are the settings (a, a', b, b'). The summary also holds the closed-form value at the
    same settings, its maximum over a 1-degree lattice, the eight-sequence combination of the
    coincident outcome sequences and the Bell-type bound applicable to the model.
    """

    name = "chsh"
    models = (LOCKED_MODE, FURRY, BARUT, UNIFORM)
    default_angles = "chsh-optimal"

    def run_experiment(
        self,
        angles: list = None,
        window: float = 1e-6,
        mean_rate: float = 1000.0,
        efficiency: float = 1.0,
        jitter: float = 0.0,
        dark_count_rate: float = 0.0,
    ):
        settings = resolve_angles(self.default_angles if angles is None else angles)
        if len(settings) != 4:
            raise ConfigurationError(f"chsh needs exactly four settings (a, a', b, b'), got {len(settings)}.")
        a, a_prime, b, b_prime = settings
        pairs = [(a, b), (a, b_prime), (a_prime, b_prime), (a_prime, b)]

        options = {}
        if self.model != BARUT:
            options = dict(
                window=window,
                mean_rate=mean_rate,
                efficiency=efficiency,
                jitter=jitter,
                dark_count_rate=dark_count_rate,
                keep_sequences=True,
            )
        estimator = CANONICAL_ESTIMATOR[self.model]
        results = [
            simulate(self.model, theta1, theta2, self.n_events, derive_seed(self.seed, k), **options)
            for k, (theta1, theta2) in enumerate(pairs)
        ]
        missing = [r.theta for r in results if estimator not in r.estimates]
        if missing:
            raise DegenerateInputError(f"No {estimator} estimate at the relative angles {missing}.")
        estimates = [result.estimates[estimator] for result in results]
        chsh_value = chsh(*(e.value for e in estimates))
        chsh_std_err = float(np.sqrt(sum(e.std_err ** 2 for e in estimates)))

        correlation = correlation_function(self.model)

        lattice_max, lattice_settings = chsh_lattice_max(correlation)
        scalars = dict(
            chsh_value=chsh_value,
            chsh_std_err=chsh_std_err,
            analytic_chsh_value=chsh_from_settings(correlation, a, a_prime, b, b_prime),
            analytic_lattice_max=lattice_max,
            analytic_lattice_settings=list(lattice_settings),
            estimator=estimator,
        )
        if all(result.sequences is not None and len(result.sequences[0]) for result in results):
            scalars["eight_sequence_lhs"], scalars["eight_sequence_bound"] = eight_sequence_check(
                [result.sequences for result in results]
            )

        samples_a = samples_b = None
        if self.model == LOCKED_MODE:
            batch = source_classes[LOCKED_MODE](seed=derive_seed(self.seed, 0, 0), n_events=self.n_events).emit()
            samples_a = np.einsum("ij,ij->i", batch.left, batch.left)
            samples_b = np.einsum("ij,ij->i", batch.right, batch.right)
        bound = applicable_bound(self.model, samples_a, samples_b)
        if bound.kind == "trivial":
            # deterministic outcomes only constrain the two terms sharing setting a
            trivial_lhs, holds = trivial_bound_check(estimates[0].value, estimates[1].value)
            scalars.update(trivial_lhs=trivial_lhs, violates_bound=not bool(holds))
        else:
            scalars.update(violates_bound=bool(chsh_value > bound.value))
        scalars.update(bound_kind=bound.kind, bound=bound.value)
        logger.info(
            "chsh %s: %.4f +/- %.4f (bound %s = %g)", self.model, chsh_value, chsh_std_err, bound.kind, bound.value
        )

        table = pd.DataFrame(
            [
                dict(theta=r.theta, model=self.model, estimator=estimator, value=e.value, std_err=e.std_err, n=e.n)
                for r, e in zip(results, estimates)
            ],
            columns=RESULT_COLUMNS,
        )
        return ExperimentResult(table=table, scalars=scalars)
