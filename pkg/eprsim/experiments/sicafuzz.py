"""Exhaustive and randomized checks of the four- and eight-sequence Bell combinations."""
import logging

import pandas as pd

from ..baseexperiment import BaseExperiment, ExperimentResult
from ..statistics import (
    CHSH_BOUND,
    EIGHT_SEQUENCE_BOUND,
    eight_sequence_exhaustive_max,
    eight_sequence_fuzz,
    sica_exhaustive_max,
    sica_fuzz,
)

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["check", "length", "n_trials", "n_violations", "max_lhs", "bound"]


class SicaFuzzExperiment(BaseExperiment):
    """n_events is the number of random quadruplets (and of random eight-sequence sets)."""

    name = "sica-fuzz"
    default_n_events = 100000

    @staticmethod
    def _row(check, length, n_trials, max_lhs, bound, n_violations=None):
        if n_violations is None:
            n_violations = int(max_lhs > bound)
        return dict(
            check=check, length=length, n_trials=n_trials, n_violations=n_violations, max_lhs=max_lhs, bound=bound
        )

    def run_experiment(
        self,
        lengths: list = tuple(range(1, 65)),
        exhaustive_length: int = 4,
        eight_sequence_length: int = 16,
        eight_sequence_exhaustive_length: int = 2,
    ):
        four = sica_fuzz(self.n_events, lengths=lengths, seed=self.seed, progress=self.progress)
        eight = eight_sequence_fuzz(self.n_events, length=eight_sequence_length, seed=self.seed, progress=self.progress)
        exhaustive_four = sica_exhaustive_max(exhaustive_length)
        exhaustive_eight = eight_sequence_exhaustive_max(eight_sequence_exhaustive_length)
        rows = [
            self._row("sica-exhaustive", exhaustive_length, 16 ** exhaustive_length, exhaustive_four, CHSH_BOUND),
            self._row("sica-fuzz", max(lengths), four.n_trials, four.max_lhs, four.bound, four.n_violations),
            self._row(
                "eight-sequence-exhaustive",
                eight_sequence_exhaustive_length,
                256 ** eight_sequence_exhaustive_length,
                exhaustive_eight,
                EIGHT_SEQUENCE_BOUND,
            ),
            self._row(
                "eight-sequence-fuzz",
                eight_sequence_length,
                eight.n_trials,
                eight.max_lhs,
                eight.bound,
                eight.n_violations,
            ),
        ]
        scalars = dict(
            n_violations=four.n_violations,
            max_lhs=four.max_lhs,
            exhaustive_max_lhs=exhaustive_four,
            eight_sequence_violations=eight.n_violations,
            eight_sequence_max_lhs=eight.max_lhs,
            eight_sequence_exhaustive_max_lhs=exhaustive_eight,
        )
        logger.info("sica fuzz: %d violations in %d trials", four.n_violations, four.n_trials)
        return ExperimentResult(table=pd.DataFrame(rows, columns=TABLE_COLUMNS), scalars=scalars)
