"""Temporal contact networks, aggregated contact networks, and reachability.

A temporal contact i -> j exists inside a window when a chain of events
with non-decreasing begin times links i to j: i is in the first event,
consecutive events share at least one member, and j is in any event along
the chain.  Each stored edge carries phi, the begin time of the first
event of the latest such chain, so ``t1 < phi <= t2`` always holds for a
window ``(t1, t2]``.

The aggregated contact network over the same window ignores order: users
are adjacent when they co-appear in at least one event, and the connected
component around a user upper-bounds everything temporal chains can reach.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from .events import EventSet
from .validation import check_positive, check_window


@dataclass
class TemporalContactNetwork:
    t1: int
    t2: int
    vertices: set[str]
    # pred[j][i] = phi of the latest chain from i reaching j
    pred: dict[str, dict[str, int]]

    @property
    def succ(self) -> dict[str, dict[str, int]]:
        if not hasattr(self, "_succ"):
            succ: dict[str, dict[str, int]] = defaultdict(dict)
            for j, sources in self.pred.items():
                for i, phi in sources.items():
                    succ[i][j] = phi
            self._succ = dict(succ)
        return self._succ

    def edges(self) -> dict[tuple[str, str], int]:
        return {
            (i, j): phi for j, sources in self.pred.items() for i, phi in sources.items()
        }

    def n_edges(self) -> int:
        return sum(len(sources) for sources in self.pred.values())

    def phi(self, i: str, j: str) -> int | None:
        return self.pred.get(j, {}).get(i)

    def reachable_set(self, i: str) -> set[str]:
        return set(self.succ.get(i, ()))

    def out_degree(self, i: str) -> int:
        return len(self.succ.get(i, ()))

    def in_degree(self, j: str) -> int:
        return len(self.pred.get(j, ()))

    def is_bidirectional(self, i: str, j: str) -> bool:
        return self.phi(i, j) is not None and self.phi(j, i) is not None

    def bidirectional_pairs(self) -> set[frozenset[str]]:
        return {
            frozenset((i, j))
            for (i, j) in self.edges()
            if self.phi(j, i) is not None
        }


def build_tcn(events: EventSet, window: tuple[int, int]) -> TemporalContactNetwork:
    """Propagate temporal contacts over events with begin time in (t1, t2].

    Events are processed in non-decreasing begin-time order; within one
    event every pair of members contacts bidirectionally, and any contact
    that already reached a member extends to the whole event.  Events that
    share a begin time may chain in either order, so each equal-begin
    group is iterated to a fixpoint.
    """
    t1, t2 = check_window(window)
    evs = [e for e in events if t1 < e.t_begin <= t2]
    vertices = {u for e in evs for u in e.members}
    pred: dict[str, dict[str, int]] = defaultdict(dict)

    idx = 0
    while idx < len(evs):
        end = idx
        while end < len(evs) and evs[end].t_begin == evs[idx].t_begin:
            end += 1
        _propagate_group(evs[idx:end], pred)
        idx = end

    return TemporalContactNetwork(t1, t2, vertices, dict(pred))


def _propagate_group(group, pred) -> None:
    while True:
        changed = False
        for e in group:
            # every member starts a fresh chain here; anything that already
            # reached a member rides along with its original inception
            candidates: dict[str, int] = {u: e.t_begin for u in e.members}
            for u in e.members:
                for src, phi in pred[u].items():
                    cur = candidates.get(src)
                    if cur is None or phi > cur:
                        candidates[src] = phi
            for w in e.members:
                into_w = pred[w]
                for src, phi in candidates.items():
                    if src == w:
                        continue
                    cur = into_w.get(src)
                    if cur is None or phi > cur:
                        into_w[src] = phi
                        changed = True
        if not changed or len(group) == 1:
            break


def reachability(tcn: TemporalContactNetwork, i: str) -> int:
    """Count of users temporally reachable from i within the window."""
    if i not in tcn.vertices:
        raise KeyError(f"user {i!r} is not active in window ({tcn.t1}, {tcn.t2}]")
    return tcn.out_degree(i)


@dataclass
class StaticContactNetwork:
    t1: int
    t2: int
    vertices: set[str]
    adjacency: dict[str, set[str]]
    _component_members: dict[str, frozenset[str]] = field(repr=False)

    def edges(self) -> set[frozenset[str]]:
        return {frozenset((i, j)) for i, nbrs in self.adjacency.items() for j in nbrs}

    def degree(self, i: str) -> int:
        return len(self.adjacency.get(i, ()))

    def component_members(self, i: str) -> frozenset[str]:
        return self._component_members[i]

    def component_size(self, i: str) -> int:
        return len(self._component_members[i])


def build_acn(events: EventSet, window: tuple[int, int]) -> StaticContactNetwork:
    """Aggregate co-appearance over events with begin time in (t1, t2]."""
    t1, t2 = check_window(window)
    evs = [e for e in events if t1 < e.t_begin <= t2]

    adjacency: dict[str, set[str]] = defaultdict(set)
    parent: dict[str, str] = {}

    def find(u: str) -> str:
        root = u
        while parent[root] != root:
            root = parent[root]
        while parent[u] != root:
            parent[u], u = root, parent[u]
        return root

    for e in evs:
        members = sorted(e.members)
        for u in members:
            parent.setdefault(u, u)
        for a_idx, a in enumerate(members):
            for b in members[a_idx + 1 :]:
                adjacency[a].add(b)
                adjacency[b].add(a)
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra

    groups: dict[str, set[str]] = defaultdict(set)
    for u in parent:
        groups[find(u)].add(u)
    component_members = {}
    for members in groups.values():
        frozen = frozenset(members)
        for u in members:
            component_members[u] = frozen

    return StaticContactNetwork(t1, t2, set(parent), dict(adjacency), component_members)


@dataclass(frozen=True)
class CurvePoint:
    delta_t: int
    tcn_avg: float
    acn_avg: float
    tcn_max: float
    acn_max: float
    windows: int
    truncated: bool


def tile_windows(span_begin: int, span_end: int, delta_t: int):
    """Consecutive (t1, t2] windows covering begin times in [span_begin, span_end]."""
    t1 = span_begin - 1
    while t1 < span_end:
        yield (t1, t1 + delta_t)
        t1 += delta_t


def reachability_curves(
    events: EventSet,
    lengths: list[int],
    span: tuple[int, int] | None = None,
) -> list[CurvePoint]:
    """Average and maximum normalized reachability per window length.

    For every requested window length the event span is tiled into
    consecutive windows; each non-empty window contributes its mean (and
    max) vertex reachability divided by the window's active vertex count,
    and windows are averaged with equal weight.  Temporal reachability of
    a vertex is its out-degree in the window's contact closure; aggregated
    reachability is its component size minus one.  The final window is
    flagged truncated when it extends past the last event.
    """
    if not len(events):
        raise ValueError("cannot compute reachability curves of an empty event set")
    span_begin, span_end = span if span is not None else events.span()

    points = []
    for delta_t in lengths:
        check_positive(delta_t, "window length")
        sums = Counter()
        used = 0
        truncated = False
        for t1, t2 in tile_windows(span_begin, span_end, delta_t):
            if t2 > span_end:
                truncated = True
            tcn = build_tcn(events, (t1, t2))
            if not tcn.vertices:
                continue
            acn = build_acn(events, (t1, t2))
            n = len(tcn.vertices)
            tcn_reach = [tcn.out_degree(v) for v in tcn.vertices]
            acn_reach = [acn.component_size(v) - 1 for v in acn.vertices]
            sums["tcn_avg"] += sum(tcn_reach) / len(tcn_reach) / n
            sums["acn_avg"] += sum(acn_reach) / len(acn_reach) / n
            sums["tcn_max"] += max(tcn_reach) / n
            sums["acn_max"] += max(acn_reach) / n
            used += 1
        if used == 0:
            raise ValueError(f"no window of length {delta_t} contains events")
        points.append(
            CurvePoint(
                delta_t=delta_t,
                tcn_avg=sums["tcn_avg"] / used,
                acn_avg=sums["acn_avg"] / used,
                tcn_max=sums["tcn_max"] / used,
                acn_max=sums["acn_max"] / used,
                windows=used,
                truncated=truncated,
            )
        )
    return points


@dataclass
class JointDegreeDistribution:
    delta_t: int
    probabilities: dict[tuple[int, int], float]
    windows: int

    def total(self) -> float:
        return sum(self.probabilities.values())

    def to_matrix(self) -> np.ndarray:
        if not self.probabilities:
            return np.zeros((0, 0))
        max_out = max(d for d, _ in self.probabilities)
        max_in = max(d for _, d in self.probabilities)
        matrix = np.zeros((max_out + 1, max_in + 1))
        for (d_out, d_in), p in self.probabilities.items():
            matrix[d_out, d_in] = p
        return matrix


def joint_degree_distribution(
    events: EventSet,
    delta_t: int,
    span: tuple[int, int] | None = None,
) -> JointDegreeDistribution:
    """Window-averaged joint distribution of temporal out- and in-degrees.

    Each non-empty window of length ``delta_t`` contributes a normalized
    histogram of its vertices' (d_out, d_in) pairs; histograms are
    averaged over windows so the entries sum to one.
    """
    check_positive(delta_t, "window length")
    if not len(events):
        raise ValueError("cannot compute a degree distribution of an empty event set")
    span_begin, span_end = span if span is not None else events.span()

    accumulated: dict[tuple[int, int], float] = defaultdict(float)
    used = 0
    for t1, t2 in tile_windows(span_begin, span_end, delta_t):
        tcn = build_tcn(events, (t1, t2))
        if not tcn.vertices:
            continue
        n = len(tcn.vertices)
        counts = Counter((tcn.out_degree(v), tcn.in_degree(v)) for v in tcn.vertices)
        for pair, count in counts.items():
            accumulated[pair] += count / n
        used += 1

    probabilities = {pair: value / used for pair, value in accumulated.items()}
    return JointDegreeDistribution(delta_t, probabilities, used)
