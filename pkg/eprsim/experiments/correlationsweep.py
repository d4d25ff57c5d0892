"""Correlation as a function of the relative analyzer angle."""
import logging

from ..baseexperiment import BaseExperiment, ExperimentResult, resolve_angles
from ..optics import BARUT, FURRY, LOCKED_MODE, UNIFORM
from ..simulation import correlation_sweep, deviation_report

logger = logging.getLogger(__name__)


class CorrelationSweepExperiment(BaseExperiment):
    """Sweep analyzer A over the angles with analyzer B fixed at 0 and report every estimator."""

    name = "correlation-sweep"
    models = (LOCKED_MODE, FURRY, BARUT, UNIFORM)
    default_angles = "sweep-16"

    def run_experiment(
        self,
        angles: list = None,
        window: float = 1e-6,
        mean_rate: float = 1000.0,
        efficiency: float = 1.0,
        jitter: float = 0.0,
        dark_count_rate: float = 0.0,
        single_mode: bool = False,
    ):
        angles = resolve_angles(self.default_angles if angles is None else angles)
        options = dict(
            window=window,
            mean_rate=mean_rate,
            efficiency=efficiency,
            jitter=jitter,
            dark_count_rate=dark_count_rate,
            single_mode=single_mode,
        )
        table = correlation_sweep(self.model, angles, self.n_events, self.seed, progress=self.progress, **options)
        report = deviation_report(table, self.model)
        logger.info(
            "%s sweep: max deviation %.4g (max z %.3g)", self.model, report["max_abs_deviation"], report["max_z"]
        )
        scalars = dict(
            max_deviation=report["max_abs_deviation"],
            max_z=report["max_z"],
            argmax_theta=report["argmax_theta"],
            n_angles=len(angles),
        )
        return ExperimentResult(table=table, scalars=scalars)
