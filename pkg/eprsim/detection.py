"""
Square-law photodetection and coincidence counting.

Channel intensities become timestamped clicks here; this is the only place where the
optical models acquire statistics. Each click selects at most one channel of its analyzer.
"""
import logging
from dataclasses import dataclass
from typing import List
from warnings import warn

import numpy as np
import pandas as pd

from .basesource import EmissionBatch
from .exceptions import ConfigurationError, InputError
from .optics import LOCKED_MODE, ChannelIntensities, joint_probabilities, project_fields
from .utils.io import write_table
from .utils.random import make_rng, spawn_rngs

logger = logging.getLogger(__name__)

STATION_A = "A"
STATION_B = "B"
ACCIDENTALS = "accidentals"

# column order of joint probability arrays and the channel signs each column stands for
JOINT_OUTCOMES = ((1, 1), (-1, -1), (1, -1), (-1, 1))
CHANNELS_A = np.array([a for a, _ in JOINT_OUTCOMES], dtype=np.int8)
CHANNELS_B = np.array([b for _, b in JOINT_OUTCOMES], dtype=np.int8)


@dataclass(frozen=True)
class EventRecord:
    time: float
    station: str
    channel: int
    lambda_tag: float


@dataclass(frozen=True)
class EventStream:
    """Time-ordered clicks of one station; parallel arrays of time, channel and hidden-variable tag."""

    station: str
    time: np.ndarray
    channel: np.ndarray
    lambda_tag: np.ndarray

    def __len__(self) -> int:
        return len(self.time)

    def __iter__(self):
        for t, c, tag in zip(self.time, self.channel, self.lambda_tag):
            yield EventRecord(time=float(t), station=self.station, channel=int(c), lambda_tag=float(tag))

    @classmethod
    def empty(cls, station: str) -> "EventStream":
        return cls(station, np.empty(0), np.empty(0, dtype=np.int8), np.empty(0))

    @classmethod
    def from_records(cls, station: str, records: List[EventRecord]) -> "EventStream":
        return cls(
            station=station,
            time=np.array([r.time for r in records], dtype=float),
            channel=np.array([r.channel for r in records], dtype=np.int8),
            lambda_tag=np.array([r.lambda_tag for r in records], dtype=float),
        )

    def is_sorted(self) -> bool:
        return bool(np.all(np.diff(self.time) >= 0))

    def sorted(self) -> "EventStream":
        order = np.argsort(self.time, kind="stable")
        return EventStream(self.station, self.time[order], self.channel[order], self.lambda_tag[order])

    def merge(self, other: "EventStream") -> "EventStream":
        if other.station != self.station:
            raise InputError(f"Cannot merge streams of stations {self.station} and {other.station}.")
        merged = EventStream(
            self.station,
            np.concatenate([self.time, other.time]),
            np.concatenate([self.channel, other.channel]),
            np.concatenate([self.lambda_tag, other.lambda_tag]),
        )
        return merged.sorted()

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            dict(time=self.time, station=self.station, channel=self.channel.astype(int), **{"lambda": self.lambda_tag})
        )

    def to_csv(self, path):
        """Write the stream with columns time,station,channel,lambda."""
        return write_table(self.to_dataframe(), path)


@dataclass(frozen=True)
class CoincidenceCounts:
    n_pp: int
    n_mm: int
    n_pm: int
    n_mp: int
    n_singles_a: int
    n_singles_b: int
    window: float
    duration: float

    def __post_init__(self):
        counts = (self.n_pp, self.n_mm, self.n_pm, self.n_mp, self.n_singles_a, self.n_singles_b)
        if min(counts) < 0:
            raise InputError(f"Counts must be non-negative, got {counts}.")
        if not self.window < self.duration:
            raise InputError(f"The coincidence window ({self.window}) must be shorter than the run ({self.duration}).")

    @property
    def total(self) -> int:
        return self.n_pp + self.n_mm + self.n_pm + self.n_mp

    def as_array(self) -> np.ndarray:
        return np.array([self.n_pp, self.n_mm, self.n_pm, self.n_mp])

    def __add__(self, other: "CoincidenceCounts") -> "CoincidenceCounts":
        """Merge counts of two disjoint batches taken with the same window."""
        if other.window != self.window:
            raise InputError("Only counts taken with the same coincidence window can be merged.")
        return CoincidenceCounts(
            n_pp=self.n_pp + other.n_pp,
            n_mm=self.n_mm + other.n_mm,
            n_pm=self.n_pm + other.n_pm,
            n_mp=self.n_mp + other.n_mp,
            n_singles_a=self.n_singles_a + other.n_singles_a,
            n_singles_b=self.n_singles_b + other.n_singles_b,
            window=self.window,
            duration=self.duration + other.duration,
        )


def _check_efficiency(efficiency: float):
    if not 0.0 < efficiency <= 1.0:
        raise ConfigurationError(f"efficiency must lie in (0, 1], got {efficiency}.")


def _check_jitter(jitter: float):
    if jitter < 0:
        raise ConfigurationError(f"jitter must be non-negative, got {jitter}.")


def detect(
    intensities: ChannelIntensities,
    emission_time: float,
    efficiency: float,
    rng: np.random.Generator,
    jitter: float = 0.0,
    station: str = STATION_A,
    lambda_tag: float = 0.0,
) -> List[EventRecord]:
    """
    Square-law detection of one emission at one station.

    A single uniform draw selects the +1 channel with probability efficiency * i_plus / incident,
    the -1 channel with probability efficiency * i_minus / incident, and no click otherwise.
    Returns an empty list or a list holding the one click.
    """
    _check_efficiency(efficiency)
    _check_jitter(jitter)
    incident = intensities.total
    u = rng.random()
    if incident <= 0:
        return []
    p_plus = efficiency * intensities.i_plus / incident
    p_minus = efficiency * intensities.i_minus / incident
    if u < p_plus:
        channel = 1
    elif u < p_plus + p_minus:
        channel = -1
    else:
        return []
    time = emission_time + (jitter * rng.random() if jitter > 0 else 0.0)
    return [EventRecord(time=time, station=station, channel=channel, lambda_tag=lambda_tag)]


def _jittered(emit_time: np.ndarray, jitter: float, rng: np.random.Generator) -> np.ndarray:
    if jitter > 0:
        return emit_time + jitter * rng.random(len(emit_time))
    return np.array(emit_time, dtype=float)


def detect_stream(
    station: str,
    i_plus: np.ndarray,
    i_minus: np.ndarray,
    emit_time: np.ndarray,
    lambda_tag: np.ndarray,
    efficiency: float,
    rng: np.random.Generator,
    jitter: float = 0.0,
) -> EventStream:
    """Vectorized detect over a batch of emissions at one station (independent arms)."""
    _check_efficiency(efficiency)
    _check_jitter(jitter)
    i_plus, i_minus = np.asarray(i_plus, dtype=float), np.asarray(i_minus, dtype=float)
    incident = i_plus + i_minus
    u = rng.random(len(incident))
    times = _jittered(np.asarray(emit_time, dtype=float), jitter, rng)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_plus = np.where(incident > 0, efficiency * i_plus / incident, 0.0)
        p_minus = np.where(incident > 0, efficiency * i_minus / incident, 0.0)
    channel = np.where(u < p_plus, 1, np.where(u < p_plus + p_minus, -1, 0)).astype(np.int8)
    clicked = channel != 0
    stream = EventStream(station, times[clicked], channel[clicked], np.asarray(lambda_tag, dtype=float)[clicked])
    return stream.sorted()


def detect_pairs(
    probabilities: np.ndarray,
    emit_time: np.ndarray,
    lambda_tag: np.ndarray,
    efficiency: float,
    rng: np.random.Generator,
    jitter: float = 0.0,
):
    """
    Detect a batch of pairs whose channels are drawn jointly from per-emission coincidence probabilities.

    probabilities is an (n, 4) array with columns (pp, mm, pm, mp). One draw per emission selects
    the channel pair; each station then clicks with probability efficiency.
    Returns (stream_a, stream_b).
    """
    _check_efficiency(efficiency)
    _check_jitter(jitter)
    probabilities = np.atleast_2d(np.asarray(probabilities, dtype=float))
    n = len(probabilities)
    cumulative = np.cumsum(probabilities, axis=1)
    cumulative[:, -1] = 1.0
    u = rng.random(n)
    outcome = np.argmax(u[:, None] < cumulative, axis=1)
    keep_a = rng.random(n) < efficiency
    keep_b = rng.random(n) < efficiency
    times_a = _jittered(np.asarray(emit_time, dtype=float), jitter, rng)
    times_b = _jittered(np.asarray(emit_time, dtype=float), jitter, rng)
    lambda_tag = np.asarray(lambda_tag, dtype=float)
    stream_a = EventStream(STATION_A, times_a[keep_a], CHANNELS_A[outcome][keep_a], lambda_tag[keep_a])
    stream_b = EventStream(STATION_B, times_b[keep_b], CHANNELS_B[outcome][keep_b], lambda_tag[keep_b])
    return stream_a.sorted(), stream_b.sorted()


def dark_counts(station: str, rate: float, duration: float, rng: np.random.Generator) -> EventStream:
    """Uniform background clicks at the given rate over [0, duration] with random channel signs."""
    if rate < 0:
        raise ConfigurationError(f"dark_count_rate must be non-negative, got {rate}.")
    if rate == 0 or duration <= 0:
        return EventStream.empty(station)
    n = rng.poisson(rate * duration)
    times = np.sort(rng.uniform(0.0, duration, size=n))
    channel = np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
    return EventStream(station, times, channel, np.full(n, np.nan))


def poisson_stream(station: str, mean_rate: float, n_events: int, rng: np.random.Generator) -> EventStream:
    """Unpaired clicks at Poisson times with random channel signs."""
    if not mean_rate > 0:
        raise ConfigurationError(f"mean_rate must be positive, got {mean_rate}.")
    times = np.cumsum(rng.exponential(1.0 / mean_rate, size=n_events))
    channel = np.where(rng.random(n_events) < 0.5, 1, -1).astype(np.int8)
    return EventStream(station, times, channel, np.full(n_events, np.nan))


def detect_emissions(
    batch: EmissionBatch,
    theta1: float,
    theta2: float,
    rng: np.random.Generator,
    efficiency: float = 1.0,
    jitter: float = 0.0,
    dark_count_rate: float = 0.0,
):
    """
    Pass a batch of pair emissions through both analyzers and detect them.

    Locked-mode pairs are detected through their fourth-order (coincidence) intensity; every
    other polarization model through independent per-arm Malus intensities.
    Returns (stream_a, stream_b).
    """
    detection_rng, dark_rng = spawn_rngs(int(rng.integers(2 ** 62)), 2)
    if batch.model == LOCKED_MODE:
        probabilities = joint_probabilities(theta1, theta2, batch.left, batch.right)
        stream_a, stream_b = detect_pairs(
            probabilities, batch.emit_time, batch.hidden, efficiency, detection_rng, jitter=jitter
        )
    else:
        i_plus_a, i_minus_a = project_fields(theta1, batch.left)
        i_plus_b, i_minus_b = project_fields(theta2, batch.right)
        stream_a = detect_stream(
            STATION_A, i_plus_a, i_minus_a, batch.emit_time, batch.hidden, efficiency, detection_rng, jitter
        )
        stream_b = detect_stream(
            STATION_B, i_plus_b, i_minus_b, batch.emit_time, batch.hidden, efficiency, detection_rng, jitter
        )
    if dark_count_rate > 0:
        stream_a = stream_a.merge(dark_counts(STATION_A, dark_count_rate, batch.duration, dark_rng))
        stream_b = stream_b.merge(dark_counts(STATION_B, dark_count_rate, batch.duration, dark_rng))
    return stream_a, stream_b


def match_coincidences(stream_a: EventStream, stream_b: EventStream, window: float):
    """
    Pair A and B clicks with |t_A - t_B| <= window; each click is used at most once.

    A clicks are taken in time order and each takes the nearest unused B click in its window,
    ties going to the earlier B click. Returns index arrays (idx_a, idx_b) ordered by idx_a.
    """
    if window < 0:
        raise InputError(f"The coincidence window must be non-negative, got {window}.")
    for stream in (stream_a, stream_b):
        if not stream.is_sorted():
            raise InputError(f"The event stream of station {stream.station} is not time-sorted.")
    ta, tb = stream_a.time, stream_b.time
    if len(ta) == 0 or len(tb) == 0:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)

    lo = np.searchsorted(tb, ta - window, side="left")
    hi = np.searchsorted(tb, ta + window, side="right")
    n_candidates_a = hi - lo
    n_candidates_b = np.searchsorted(ta, tb + window, side="right") - np.searchsorted(ta, tb - window, side="left")

    # A click with a single candidate that sees only it forms a pair whatever the processing order
    isolated = n_candidates_a == 1
    isolated[isolated] = n_candidates_b[lo[isolated]] == 1
    claims = np.bincount(lo[isolated], minlength=len(tb))
    isolated[isolated] = claims[lo[isolated]] == 1

    used = np.zeros(len(tb), dtype=bool)
    used[lo[isolated]] = True
    extra_a, extra_b = [], []
    for i in np.flatnonzero((n_candidates_a > 0) & ~isolated):
        best, best_distance = -1, np.inf
        for j in range(lo[i], hi[i]):
            if used[j]:
                continue
            distance = abs(tb[j] - ta[i])
            if distance < best_distance:
                best, best_distance = j, distance
        if best >= 0:
            used[best] = True
            extra_a.append(i)
            extra_b.append(best)

    idx_a = np.concatenate([np.flatnonzero(isolated), np.asarray(extra_a, dtype=int)])
    idx_b = np.concatenate([lo[isolated], np.asarray(extra_b, dtype=int)])
    order = np.argsort(idx_a, kind="stable")
    return idx_a[order], idx_b[order]


def count_coincidences(stream_a: EventStream, stream_b: EventStream, window: float, duration: float):
    """Tally coincidences by channel signs within the window over a run of the given duration."""
    if not 0 <= window < duration:
        raise InputError(f"Require 0 <= window < duration, got window={window}, duration={duration}.")
    idx_a, idx_b = match_coincidences(stream_a, stream_b, window)
    channel_a = stream_a.channel[idx_a]
    channel_b = stream_b.channel[idx_b]
    return CoincidenceCounts(
        n_pp=int(np.sum((channel_a == 1) & (channel_b == 1))),
        n_mm=int(np.sum((channel_a == -1) & (channel_b == -1))),
        n_pm=int(np.sum((channel_a == 1) & (channel_b == -1))),
        n_mp=int(np.sum((channel_a == -1) & (channel_b == 1))),
        n_singles_a=len(stream_a),
        n_singles_b=len(stream_b),
        window=float(window),
        duration=float(duration),
    )


def coincident_sequences(stream_a: EventStream, stream_b: EventStream, window: float):
    """Return the paired +/-1 channel sequences (x, y) of the coincidences found in the window."""
    idx_a, idx_b = match_coincidences(stream_a, stream_b, window)
    return stream_a.channel[idx_a].astype(np.int64), stream_b.channel[idx_b].astype(np.int64)


def run_duration(n_events: int, mean_rate: float, *streams: EventStream) -> float:
    """Nominal run interval n_events / mean_rate, extended to cover the last click."""
    last = max((float(s.time[-1]) for s in streams if len(s)), default=0.0)
    return max(n_events / mean_rate, last)


def window_sweep(
    model: str,
    windows: list,
    mean_rate: float,
    n_events: int,
    seed: int,
    efficiency: float = 1.0,
    jitter: float = 0.0,
    dark_count_rate: float = 0.0,
) -> pd.DataFrame:
    """
    Coincidence rate as a function of the window width.

    For a paired-emission model the same detected streams are recounted at every window; the
    accidentals model uses two independent Poisson streams of mean_rate each.
    Returns a table with columns window, n_coincidences, pair_rate, model.
    """
    from .sources import source_classes

    windows = np.asarray(windows, dtype=float)
    if len(windows) == 0 or np.any(windows < 0) or np.any(np.diff(windows) <= 0):
        raise ConfigurationError(f"windows must be non-negative and strictly ascending, got {windows}.")
    if windows[-1] * mean_rate >= 1e-3 and model != ACCIDENTALS:
        warn(f"mean_rate * window = {windows[-1] * mean_rate:g}; the flat regime requires mean_rate * window << 1.")

    if model == ACCIDENTALS:
        rng_a, rng_b = spawn_rngs(seed, 2)
        stream_a = poisson_stream(STATION_A, mean_rate, n_events, rng_a)
        stream_b = poisson_stream(STATION_B, mean_rate, n_events, rng_b)
    else:
        if model not in source_classes or not hasattr(source_classes[model], "draw_signals"):
            raise ConfigurationError(f"window_sweep needs a polarization model or '{ACCIDENTALS}', got '{model}'.")
        batch = source_classes[model](seed=seed, n_events=n_events, mean_rate=mean_rate).emit()
        stream_a, stream_b = detect_emissions(
            batch, 0.0, 0.0, make_rng(seed, 1), efficiency=efficiency, jitter=jitter, dark_count_rate=dark_count_rate
        )

    duration = run_duration(n_events, mean_rate, stream_a, stream_b)
    rows = []
    for window in windows:
        counts = count_coincidences(stream_a, stream_b, window, duration)
        rows.append(dict(window=window, n_coincidences=counts.total, pair_rate=counts.total / duration, model=model))
        logger.debug("window %g: %d coincidences", window, counts.total)
    return pd.DataFrame(rows, columns=["window", "n_coincidences", "pair_rate", "model"])


def write_events_csv(path, *streams: EventStream, lambda_tag: bool = True):
    """Export event streams as one CSV with columns time,station,channel,lambda sorted by time."""
    table = pd.concat([s.to_dataframe() for s in streams], ignore_index=True)
    table = table.sort_values(["time", "station"], kind="mergesort").reset_index(drop=True)
    if not lambda_tag:
        table = table.drop(columns="lambda")
    return write_table(table, path)
