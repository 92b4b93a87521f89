"""Transmission graphs over event interactions.

Vertices are event interactions; a directed edge runs from a source event
to a later sink event when they share users and, for each shared user, the
source is that user's most recent event strictly before the sink's begin
time.  Grouping the sink's members by their most recent prior event makes
the per-sink shared-user sets pairwise disjoint and yields the minimum
number of edges, one per distinct source.

Construction is a single scan over begin-time-ordered events with a
per-user last-event index, so it runs in O(M log M) for M events instead
of the quadratic all-pairs search a direct reading of the edge rules
suggests.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .events import EventSet


@dataclass(frozen=True)
class TransmissionEdge:
    source: int
    sink: int
    shared_users: frozenset[str]
    t_source: int
    t_sink: int

    @property
    def delta_minutes(self) -> float:
        return (self.t_sink - self.t_source) / 60.0


@dataclass
class TransmissionGraph:
    events: EventSet
    edges: list[TransmissionEdge]
    in_degree: dict[int, int] = field(default_factory=dict)
    out_degree: dict[int, int] = field(default_factory=dict)

    def degree(self, event_id: int) -> int:
        """Sum of in- and out-degree of one event vertex."""
        return self.in_degree.get(event_id, 0) + self.out_degree.get(event_id, 0)

    def n_edges(self) -> int:
        return len(self.edges)


@dataclass
class AggregatedTransmissionGraph:
    """Multi-edge-free, unlabeled view of a transmission graph.

    ``degree`` keeps the raw in-plus-out degree per event, which is what
    user-level temporal degrees are computed from.
    """

    events: EventSet
    edges: set[tuple[int, int]]
    degree: dict[int, int]

    def degree_of(self, event_id: int) -> int:
        return self.degree.get(event_id, 0)


def build_tg(events: EventSet) -> TransmissionGraph:
    """Construct the transmission graph of an event set.

    Events sharing a begin time cannot feed each other: a source must
    begin strictly before its sink, so equal-begin candidates are skipped.
    Edge order is deterministic: sinks in (t_begin, id) order, sources by
    id within a sink.
    """
    ordered = events.events  # EventSet keeps (t_begin, id) order
    by_id = events.by_id
    edges: list[TransmissionEdge] = []
    in_degree: dict[int, int] = {}
    out_degree: dict[int, int] = {}
    last_event: dict[str, int] = {}

    idx = 0
    n = len(ordered)
    while idx < n:
        end = idx
        while end < n and ordered[end].t_begin == ordered[idx].t_begin:
            end += 1
        group = ordered[idx:end]
        for sink in group:
            shared_by_source: dict[int, list[str]] = {}
            for u in sorted(sink.members):
                src_id = last_event.get(u)
                if src_id is not None:
                    shared_by_source.setdefault(src_id, []).append(u)
            for src_id in sorted(shared_by_source):
                source = by_id[src_id]
                edges.append(
                    TransmissionEdge(
                        source=src_id,
                        sink=sink.id,
                        shared_users=frozenset(shared_by_source[src_id]),
                        t_source=source.t_begin,
                        t_sink=sink.t_begin,
                    )
                )
                out_degree[src_id] = out_degree.get(src_id, 0) + 1
                in_degree[sink.id] = in_degree.get(sink.id, 0) + 1
        for e in group:
            for u in e.members:
                last_event[u] = e.id
        idx = end

    return TransmissionGraph(events, edges, in_degree, out_degree)


def aggregate_tg(tg: TransmissionGraph) -> AggregatedTransmissionGraph:
    """Collapse parallel edges and drop time labels and direction."""
    pairs = {
        (min(e.source, e.sink), max(e.source, e.sink)) for e in tg.edges
    }
    degree = {e.id: tg.degree(e.id) for e in tg.events}
    return AggregatedTransmissionGraph(tg.events, pairs, degree)


def transmission_durations(tg: TransmissionGraph) -> list[float]:
    """Transmission durations in minutes, ordered by (t_sink, source id)."""
    ordered = sorted(tg.edges, key=lambda e: (e.t_sink, e.source, e.sink))
    return [e.delta_minutes for e in ordered]


EDGE_HEADER = ("source_id", "sink_id", "t_source", "t_sink", "shared_users")
AGGREGATE_HEADER = ("event_a", "event_b")
DEGREE_HEADER = ("event_id", "degree")


def write_tg_edges_csv(tg: TransmissionGraph, target) -> None:
    with _open(target) as handle:
        writer = csv.writer(handle)
        writer.writerow(EDGE_HEADER)
        for e in tg.edges:
            writer.writerow(
                [e.source, e.sink, e.t_source, e.t_sink, ";".join(sorted(e.shared_users))]
            )


def write_aggregate_csv(agg: AggregatedTransmissionGraph, target) -> None:
    with _open(target) as handle:
        writer = csv.writer(handle)
        writer.writerow(AGGREGATE_HEADER)
        for a, b in sorted(agg.edges):
            writer.writerow([a, b])


def write_degrees_csv(agg: AggregatedTransmissionGraph, target) -> None:
    with _open(target) as handle:
        writer = csv.writer(handle)
        writer.writerow(DEGREE_HEADER)
        for event_id in sorted(agg.degree):
            writer.writerow([event_id, agg.degree[event_id]])


def _open(target):
    if isinstance(target, (str, Path)):
        return Path(target).open("w", newline="", encoding="utf-8")
    from .sessions import _NonClosing

    return _NonClosing(target)
