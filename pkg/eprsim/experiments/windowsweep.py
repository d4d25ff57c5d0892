"""Coincidence rate against the width of the coincidence window."""
import logging

from ..baseexperiment import BaseExperiment, ExperimentResult
from ..detection import ACCIDENTALS, window_sweep
from ..exceptions import ConfigurationError
from ..optics import FURRY, LOCKED_MODE, UNIFORM
from ..statistics import fit_through_origin

logger = logging.getLogger(__name__)


class WindowSweepExperiment(BaseExperiment):
    """
    Count coincidences of one pair of detected streams at every window width.

    Unpaired clicks coincide at a rate proportional to the window; true pairs at a rate that
    does not depend on it once the window exceeds the detector jitter.
    """

    name = "window-sweep"
    models = (LOCKED_MODE, FURRY, UNIFORM, ACCIDENTALS)

    def run_experiment(
        self,
        windows: list = (1e-6, 2e-6, 4e-6, 1e-5),
        mean_rate: float = 1000.0,
        efficiency: float = 1.0,
        jitter: float = 0.0,
        dark_count_rate: float = 0.0,
    ):
        if len(windows) < 2:
            raise ConfigurationError("window-sweep needs at least two windows.")
        table = window_sweep(
            self.model,
            list(windows),
            mean_rate=mean_rate,
            n_events=self.n_events,
            seed=self.seed,
            efficiency=efficiency,
            jitter=jitter,
            dark_count_rate=dark_count_rate,
        )
        rates = table["pair_rate"].to_numpy()
        slope, r_squared = fit_through_origin(table["window"].to_numpy(), rates)
        scalars = dict(
            slope=slope,
            r_squared=r_squared,
            rate_ratio=float(rates[-1] / rates[0]) if rates[0] > 0 else float("inf"),
            window_ratio=float(windows[-1] / windows[0]) if windows[0] > 0 else float("inf"),
            relative_variation=float((rates.max() - rates.min()) / rates.mean()) if rates.mean() > 0 else 0.0,
            rate_window_product=float(mean_rate * windows[-1]),
        )
        logger.info("window sweep %s: slope %.4g, R^2 %.4f", self.model, slope, r_squared)
        return ExperimentResult(table=table, scalars=scalars)
