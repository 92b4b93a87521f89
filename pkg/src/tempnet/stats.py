"""Empirical distributions, de-seasoning null models, and summary stats.

Duration-like quantities get logarithmically growing bins (factor 1.5 per
bin by default) because their tails span orders of magnitude; sizes and
integral days get unit-width linear bins.  Histograms always keep every
input value: probabilities sum to one and counts sum to the input size.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .events import EventSet, event_duration
from .transmission import TransmissionGraph
from .validation import InvariantViolation, check_positive

MINUTES_PER_DAY = 1440
SECONDS_PER_DAY = 86400
DEFAULT_LOG_FACTOR = 1.5
REFERENCE_MARKERS_MINUTES = (120, MINUTES_PER_DAY)


@dataclass
class Histogram:
    binning: str
    bin_edges: np.ndarray
    counts: np.ndarray
    probabilities: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return self.counts.size == 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def rows(self):
        for low, high, count, prob in zip(
            self.bin_edges[:-1], self.bin_edges[1:], self.counts, self.probabilities
        ):
            yield float(low), float(high), int(count), float(prob)


def _empty_histogram(binning: str, metadata: dict) -> Histogram:
    metadata = dict(metadata)
    metadata["empty"] = True
    return Histogram(binning, np.empty(0), np.empty(0, dtype=int), np.empty(0), metadata)


def log_binned(values, factor: float = DEFAULT_LOG_FACTOR, metadata: dict | None = None) -> Histogram:
    """Histogram with bin widths growing by ``factor`` per bin."""
    if factor <= 1.0:
        raise ValueError(f"log bin factor must exceed 1, got {factor}")
    metadata = dict(metadata or {})
    metadata["factor"] = factor
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        return _empty_histogram("logarithmic", metadata)
    lo = float(vals.min())
    hi = float(vals.max())
    if lo <= 0:
        raise ValueError("log binning requires strictly positive values")
    edges = [lo]
    while edges[-1] < hi:
        edges.append(lo * factor ** len(edges))
    if len(edges) == 1:
        edges.append(lo * factor)
    counts, _ = np.histogram(vals, bins=edges)
    return Histogram(
        "logarithmic", np.asarray(edges), counts, counts / counts.sum(), metadata
    )


def integer_binned(values, min_value: int | None = None, metadata: dict | None = None) -> Histogram:
    """Unit-width histogram over integers, one bin [k, k+1) per value k."""
    metadata = dict(metadata or {})
    vals = np.asarray(list(values), dtype=int)
    if vals.size == 0:
        return _empty_histogram("linear", metadata)
    lo = int(vals.min()) if min_value is None else min(min_value, int(vals.min()))
    hi = int(vals.max())
    counts = np.bincount(vals - lo, minlength=hi - lo + 1)
    edges = np.arange(lo, hi + 2)
    return Histogram("linear", edges, counts, counts / counts.sum(), metadata)


def duration_distribution(
    events: EventSet,
    size_filter: int | None = None,
    factor: float = DEFAULT_LOG_FACTOR,
) -> Histogram:
    """Log-binned distribution of event active durations in minutes."""
    selected = [
        e for e in events if size_filter is None or e.size == size_filter
    ]
    meta = {"quantity": "event_duration_minutes", "size_filter": size_filter}
    return log_binned([event_duration(e) for e in selected], factor, meta)


def size_distribution(events: EventSet) -> Histogram:
    """Linear distribution of event sizes, binned per size from 2 up."""
    return integer_binned(
        [e.size for e in events], min_value=2, metadata={"quantity": "event_size"}
    )


def delta_distribution(deltas, factor: float = DEFAULT_LOG_FACTOR) -> Histogram:
    """Log-binned distribution of transmission durations in minutes.

    The metadata carries the two reference markers where the empirical
    shape typically bends: two teaching hours (120 min) and one day.
    """
    meta = {
        "quantity": "transmission_duration_minutes",
        "reference_markers_minutes": list(REFERENCE_MARKERS_MINUTES),
    }
    return log_binned(deltas, factor, meta)


def integral_day_distribution(deltas) -> Histogram:
    """Distribution of whole days spanned by each transmission duration."""
    days = [int(d // MINUTES_PER_DAY) for d in deltas]
    return integer_binned(
        days, min_value=0, metadata={"quantity": "transmission_integral_days"}
    )


def local_day(timestamp: int, tz_offset_minutes: int) -> int:
    return (timestamp + tz_offset_minutes * 60) // SECONDS_PER_DAY


def natural_deseason(tg: TransmissionGraph, tz_offset_minutes: int) -> list[float]:
    """Durations of edges whose endpoints begin on the same local day."""
    ordered = sorted(tg.edges, key=lambda e: (e.t_sink, e.source, e.sink))
    return [
        e.delta_minutes
        for e in ordered
        if local_day(e.t_source, tz_offset_minutes)
        == local_day(e.t_sink, tz_offset_minutes)
    ]


@dataclass(frozen=True)
class ShuffleConfig:
    seed: int
    rounds: int

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError(f"shuffle rounds must be >= 1, got {self.rounds}")


@dataclass
class ShuffleResult:
    events: EventSet
    attempted: int
    applied: int
    rejected: int


def artificial_deseason(events: EventSet, cfg: ShuffleConfig) -> ShuffleResult:
    """Shuffle begin times to destroy circadian and weekly rhythm.

    Each round picks two distinct events uniformly and exchanges their
    begin times; durations move with their event.  A swap is rejected when
    it would give some user two events with the same begin time.  Member
    sets, durations, and the multiset of begin times are all preserved.
    """
    originals = list(events.events)
    if len(originals) < 2:
        return ShuffleResult(EventSet(list(originals)), 0, 0, 0)

    begins = [e.t_begin for e in originals]
    members = [e.members for e in originals]
    # begin-time index per user; build also verifies the input invariant
    slot: dict[str, dict[int, int]] = {}
    for idx, event in enumerate(originals):
        for u in event.members:
            user_slots = slot.setdefault(u, {})
            if event.t_begin in user_slots:
                raise InvariantViolation(
                    f"user {u!r} already has an event beginning at {event.t_begin}"
                )
            user_slots[event.t_begin] = idx

    rng = np.random.default_rng(cfg.seed)
    applied = rejected = 0
    for _ in range(cfg.rounds):
        i = int(rng.integers(len(originals)))
        j = int(rng.integers(len(originals) - 1))
        if j >= i:
            j += 1
        bi, bj = begins[i], begins[j]
        if bi == bj:
            applied += 1
            continue
        conflict = any(
            slot[u].get(bj) not in (None, i, j) for u in members[i]
        ) or any(
            slot[u].get(bi) not in (None, i, j) for u in members[j]
        )
        if conflict:
            rejected += 1
            continue
        for u in members[i]:
            del slot[u][bi]
        for u in members[j]:
            del slot[u][bj]
        for u in members[i]:
            slot[u][bj] = i
        for u in members[j]:
            slot[u][bi] = j
        begins[i], begins[j] = bj, bi
        applied += 1

    shuffled = [
        replace(e, t_begin=b, t_end=b + (e.t_end - e.t_begin))
        for e, b in zip(originals, begins)
    ]
    return ShuffleResult(EventSet(shuffled), cfg.rounds, applied, rejected)


def degree_cv(values) -> float:
    """Coefficient of variation (population std over mean) of degrees."""
    vals = np.asarray(list(values), dtype=float)
    if vals.size == 0:
        raise ValueError("cannot compute a coefficient of variation of nothing")
    mean = vals.mean()
    if mean == 0:
        raise ValueError("coefficient of variation is undefined for zero mean")
    return float(vals.std(ddof=0) / mean)


def summarize(events: EventSet, tg: TransmissionGraph) -> dict:
    """Headline dataset numbers for reports and provenance."""
    summary = {
        "n_events": len(events),
        "n_users": len(events.users()),
        "n_tg_edges": tg.n_edges(),
    }
    if len(events):
        begin, end = events.span()
        summary["span_begin"] = begin
        summary["span_end"] = end
        degrees = [tg.degree(e.id) for e in events]
        if any(degrees):
            summary["event_degree_cv"] = degree_cv(degrees)
    return summary


HISTOGRAM_HEADER = ("bin_low", "bin_high", "count", "probability")


def write_histogram_csv(hist: Histogram, target) -> None:
    handle, close = _target(target)
    try:
        writer = csv.writer(handle)
        writer.writerow(HISTOGRAM_HEADER)
        for low, high, count, prob in hist.rows():
            writer.writerow([repr(low), repr(high), count, repr(prob)])
    finally:
        if close:
            handle.close()


def histogram_metadata(hist: Histogram) -> dict:
    return {
        "binning": hist.binning,
        "total": hist.total,
        **hist.metadata,
    }


def _target(target):
    if isinstance(target, (str, Path)):
        return Path(target).open("w", newline="", encoding="utf-8"), True
    return target, False
