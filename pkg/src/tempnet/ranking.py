"""Temporal degrees, participation activity potentials, and rank accuracy.

A user's temporal degree is the largest in-plus-out degree among the
transmission-graph vertices (events) the user participates in; computing
it requires the graph.  The participation activity potential of an event,
``(total_active_duration ** alpha) * (size ** (1 - alpha))``, needs only
the event itself, and the per-user maximum over involved events (MPAP)
is the cheap stand-in ranking whose agreement with the temporal-degree
ranking is scored here.

All members of an event share its exclusive interval, so the total active
duration is ``size * duration``; durations enter in minutes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .events import EventSet, event_duration
from .transmission import AggregatedTransmissionGraph, aggregate_tg, build_tg
from .validation import check_alpha


@dataclass(frozen=True)
class UserScore:
    user: str
    kappa: int
    mpap: float
    involved_events: tuple[int, ...]


@dataclass(frozen=True)
class RankStat:
    rank: int
    kappa: int
    mean_ar: float
    std_ar: float
    count: int


@dataclass
class RankingReport:
    window: tuple[int, int]
    alpha_star: float
    f_curve: list[tuple[float, float]]
    scores: list[UserScore]
    ar: dict[str, float]
    rank_table: list[RankStat]

    def top_users(self, k: int) -> list[str]:
        ordered = sorted(self.scores, key=lambda s: (-s.mpap, s.user))
        return [s.user for s in ordered[:k]]

    def to_json_dict(self) -> dict:
        return {
            "window": list(self.window),
            "alpha_star": self.alpha_star,
            "f_curve": [{"alpha": a, "f": f} for a, f in self.f_curve],
            "users": [
                {
                    "user": s.user,
                    "kappa": s.kappa,
                    "mpap": s.mpap,
                    "ar": self.ar[s.user],
                }
                for s in self.scores
            ],
            "ranks": [
                {
                    "rank": r.rank,
                    "kappa": r.kappa,
                    "mean_ar": r.mean_ar,
                    "std_ar": r.std_ar,
                    "count": r.count,
                }
                for r in self.rank_table
            ],
        }


def temporal_degree(agg: AggregatedTransmissionGraph, events: EventSet) -> dict[str, int]:
    """Maximum event degree per user; zero for users in no event."""
    kappa: dict[str, int] = {}
    for e in events:
        degree = agg.degree_of(e.id)
        for u in e.members:
            if degree > kappa.get(u, -1):
                kappa[u] = degree
    return kappa


def pap(e, alpha: float) -> float:
    """Participation activity potential of one event."""
    check_alpha(alpha)
    total_duration = e.size * event_duration(e)
    return total_duration**alpha * e.size ** (1.0 - alpha)


def mpap(user: str, events: EventSet, alpha: float) -> float:
    """Maximum participation activity potential over a user's events."""
    check_alpha(alpha)
    involved = events.by_user.get(user, ())
    if not involved:
        return 0.0
    return max(pap(e, alpha) for e in involved)


def user_scores(
    events: EventSet, agg: AggregatedTransmissionGraph, alpha: float
) -> list[UserScore]:
    """Per-user kappa and MPAP for every user involved in at least one event."""
    check_alpha(alpha)
    kappa = temporal_degree(agg, events)
    paps = {e.id: pap(e, alpha) for e in events}
    scores = []
    for user in sorted(events.by_user):
        involved = events.by_user[user]
        scores.append(
            UserScore(
                user=user,
                kappa=kappa[user],
                mpap=max(paps[e.id] for e in involved),
                involved_events=tuple(sorted(e.id for e in involved)),
            )
        )
    return scores


def accuracy_rate(scores: list[UserScore], v: str) -> float:
    """Fraction of other users placed consistently by kappa and by MPAP.

    Every other user lands in one of three classes (above, tied, below)
    relative to v under each ranking; only users in the same class under
    both count as consistent.
    """
    if len(scores) < 2:
        raise ValueError("accuracy rate needs at least two users")
    target = next(s for s in scores if s.user == v)
    hits = 0
    for s in scores:
        if s.user == v:
            continue
        kappa_side = (s.kappa > target.kappa) - (s.kappa < target.kappa)
        mpap_side = (s.mpap > target.mpap) - (s.mpap < target.mpap)
        if kappa_side == mpap_side:
            hits += 1
    return hits / (len(scores) - 1)


def accuracy_rates(scores: list[UserScore]) -> dict[str, float]:
    """Accuracy rates for all users at once (vectorized pair comparison)."""
    if len(scores) < 2:
        raise ValueError("accuracy rate needs at least two users")
    kappa = np.array([s.kappa for s in scores], dtype=np.int64)
    mpap_values = np.array([s.mpap for s in scores], dtype=float)
    n = len(scores)
    ars = np.empty(n)
    chunk = max(1, 2**22 // max(n, 1))
    for start in range(0, n, chunk):
        rows = slice(start, min(start + chunk, n))
        kappa_side = np.sign(kappa[None, :] - kappa[rows, None])
        mpap_side = np.sign(mpap_values[None, :] - mpap_values[rows, None])
        # the diagonal always agrees (0 == 0); drop it from the tally
        ars[rows] = ((kappa_side == mpap_side).sum(axis=1) - 1) / (n - 1)
    return {s.user: float(a) for s, a in zip(scores, ars)}


def accuracy_by_rank(scores: list[UserScore], ars: dict[str, float]) -> list[RankStat]:
    """Mean and population spread of AR per temporal-degree rank.

    Users sharing a kappa value share a rank; ranks are dense and start
    at 1 for the largest kappa.
    """
    by_kappa: dict[int, list[float]] = {}
    for s in scores:
        by_kappa.setdefault(s.kappa, []).append(ars[s.user])
    table = []
    for rank, kappa in enumerate(sorted(by_kappa, reverse=True), start=1):
        values = np.asarray(by_kappa[kappa])
        table.append(
            RankStat(
                rank=rank,
                kappa=kappa,
                mean_ar=float(values.mean()),
                std_ar=float(values.std(ddof=0)),
                count=len(values),
            )
        )
    return table


def weighted_accuracy(scores: list[UserScore], ars: dict[str, float]) -> float:
    """Kappa-weighted mean accuracy over the distinct kappa values present."""
    table = accuracy_by_rank(scores, ars)
    weight = sum(r.kappa for r in table)
    if weight == 0:
        raise ValueError("weighted accuracy is undefined when every kappa is zero")
    return sum(r.kappa * r.mean_ar for r in table) / weight


def alpha_grid(step: float) -> list[float]:
    if not 0.0 < step < 1.0:
        raise ValueError(f"grid step must lie in (0, 1), got {step}")
    grid = [round(k * step, 12) for k in range(int(1.0 / step) + 1)]
    if grid[-1] < 1.0:
        grid.append(1.0)
    return grid


def optimize_alpha(
    events: EventSet,
    agg: AggregatedTransmissionGraph,
    grid_step: float = 0.01,
) -> tuple[float, list[tuple[float, float]]]:
    """Evaluate the weighted accuracy on an alpha grid and pick the argmax.

    Ties go to the smallest alpha.
    """
    curve = []
    best_alpha, best_f = None, -1.0
    for alpha in alpha_grid(grid_step):
        scores = user_scores(events, agg, alpha)
        f_value = weighted_accuracy(scores, accuracy_rates(scores))
        curve.append((alpha, f_value))
        if f_value > best_f:
            best_alpha, best_f = alpha, f_value
    return best_alpha, curve


def build_report(
    events: EventSet,
    alpha: float | None = None,
    grid_step: float = 0.01,
    window: tuple[int, int] | None = None,
) -> RankingReport:
    """Full ranking report, optimizing alpha when none is given."""
    if window is not None:
        events = events.restrict(*window)
        report_window = window
    else:
        report_window = (events.span()[0] - 1, events.span()[1]) if len(events) else (0, 0)
    if not len(events):
        raise ValueError("cannot rank users of an empty event set")

    agg = aggregate_tg(build_tg(events))
    if alpha is None:
        alpha_star, curve = optimize_alpha(events, agg, grid_step)
    else:
        alpha_star = check_alpha(alpha)
        scores = user_scores(events, agg, alpha_star)
        curve = [(alpha_star, weighted_accuracy(scores, accuracy_rates(scores)))]

    scores = user_scores(events, agg, alpha_star)
    ars = accuracy_rates(scores)
    return RankingReport(
        window=report_window,
        alpha_star=alpha_star,
        f_curve=curve,
        scores=scores,
        ar=ars,
        rank_table=accuracy_by_rank(scores, ars),
    )


def write_report_json(report: RankingReport, target) -> None:
    payload = json.dumps(report.to_json_dict(), indent=2)
    if isinstance(target, (str, Path)):
        Path(target).write_text(payload + "\n", encoding="utf-8")
    else:
        target.write(payload + "\n")
