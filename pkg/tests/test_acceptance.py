"""End-to-end acceptance gate.

Each test is one exit criterion; it prints a single pass/fail line so a
full run reads as a checklist.  Criteria are exact unless a runtime bound
is part of the contract.
"""

import functools
import statistics
import time
from collections import Counter

import numpy as np

from oracles import (
    brute_force_contacts,
    most_recent_prior,
    random_event_set,
    random_raw_events,
)
from tempnet.contacts import build_acn, build_tcn, reachability_curves
from tempnet.events import EventInteraction, EventSet, extract_events
from tempnet.ranking import (
    accuracy_rates,
    pap,
    user_scores,
    weighted_accuracy,
)
from tempnet.ranking import alpha_grid
from tempnet.stats import ShuffleConfig, artificial_deseason, integral_day_distribution
from tempnet.synth import GeneratorConfig, generate
from tempnet.transmission import aggregate_tg, build_tg, transmission_durations


def criterion(number, description):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] criterion {number:2d}: {description}")
                raise
            print(f"[PASS] criterion {number:2d}: {description}")

        return wrapper

    return decorate


@criterion(1, "contact closure equals brute-force chain enumeration on 1000 instances")
def test_tcn_oracle_equivalence():
    started = time.perf_counter()
    rng = np.random.default_rng(101)
    for _ in range(1000):
        events = random_raw_events(rng, max_users=8, max_events=15)
        lo, hi = events.span()
        window = (lo - 1, hi)
        assert build_tcn(events, window).edges() == brute_force_contacts(events, *window)
    assert time.perf_counter() - started < 60.0


@criterion(2, "handoff fixture yields the exact directed and bidirectional contacts")
def test_handoff_fixture_edges(handoff_events):
    tcn = build_tcn(handoff_events, (0, 300))
    directed_only = {
        (i, j) for (i, j) in tcn.edges() if tcn.phi(j, i) is None
    }
    assert directed_only == {("a", "c"), ("a", "d")}
    assert tcn.bidirectional_pairs() == {
        frozenset(p) for p in (("a", "b"), ("b", "c"), ("b", "d"), ("c", "d"))
    }
    assert tcn.edges() == {
        ("a", "b"): 100, ("b", "a"): 100,
        ("a", "c"): 100, ("a", "d"): 100,
        ("b", "c"): 200, ("c", "b"): 200,
        ("b", "d"): 200, ("d", "b"): 200,
        ("c", "d"): 200, ("d", "c"): 200,
    }


@criterion(3, "pair-reuse fixture builds a 5-vertex, 7-edge transmission graph")
def test_pair_reuse_fixture_shape(pair_reuse_events):
    tg = build_tg(pair_reuse_events)
    assert len(pair_reuse_events) == 5
    assert tg.n_edges() == 7


@criterion(4, "transmission edges satisfy all three rules on 1000 instances")
def test_transmission_rules_hold():
    rng = np.random.default_rng(202)
    for _ in range(1000):
        events = random_event_set(rng)
        tg = build_tg(events)
        by_id = events.by_id
        per_user_events = events.by_user

        per_sink = {}
        for edge in tg.edges:
            # rule 1: a non-empty shared set inside both endpoints
            assert edge.shared_users
            assert edge.shared_users <= by_id[edge.source].members
            assert edge.shared_users <= by_id[edge.sink].members
            # rule 2: strictly earlier source, no same-user event between
            assert edge.t_source < edge.t_sink
            for u in edge.shared_users:
                for other in per_user_events[u]:
                    assert not (edge.t_source < other.t_begin < edge.t_sink)
            per_sink.setdefault(edge.sink, []).append(edge)

        # rule 3: in-edges partition the sink members that have priors,
        # one edge per distinct most-recent-prior source
        oracle = most_recent_prior(events)
        for sink in events:
            edges = per_sink.get(sink.id, [])
            covered = set()
            for edge in edges:
                assert not (edge.shared_users & covered)
                covered |= edge.shared_users
            with_priors = {u for u in sink.members if (sink.id, u) in oracle}
            assert covered == with_priors
            assert {e.source for e in edges} == {
                oracle[(sink.id, u)] for u in with_priors
            }


@criterion(5, "temporal reach stays inside the aggregated component, curves ordered")
def test_containment():
    rng = np.random.default_rng(303)
    for _ in range(300):
        events = random_event_set(rng)
        if not len(events):
            continue
        lo, hi = events.span()
        windows = [(lo - 1, hi), (lo - 1, max(lo, (lo + hi) // 2)), ((lo + hi) // 2, hi + 5)]
        for window in windows:
            if window[0] >= window[1]:
                continue
            tcn = build_tcn(events, window)
            acn = build_acn(events, window)
            for v in tcn.vertices:
                assert tcn.reachable_set(v) <= set(acn.component_members(v))
    rng = np.random.default_rng(304)
    for _ in range(40):
        events = random_event_set(rng)
        if not len(events):
            continue
        span = events.span()
        width = max(1, (span[1] - span[0]) // 3)
        for pt in reachability_curves(events, [width, 3 * width]):
            assert pt.tcn_avg <= pt.acn_avg + 1e-12
            assert pt.tcn_max <= pt.acn_max + 1e-12


@criterion(6, "begin-time shuffle preserves every conserved multiset on 100 runs")
def test_shuffle_null_model():
    base = extract_events(generate(GeneratorConfig(seed=77, n_users=60, n_weeks=2)))
    begins = Counter(e.t_begin for e in base)
    durations = Counter(e.t_end - e.t_begin for e in base)
    sizes = Counter(e.size for e in base)
    memberships = Counter(e.members for e in base)
    for seed in range(100):
        result = artificial_deseason(base, ShuffleConfig(seed=seed, rounds=2 * len(base)))
        got = result.events
        assert Counter(e.t_begin for e in got) == begins
        assert Counter(e.t_end - e.t_begin for e in got) == durations
        assert Counter(e.size for e in got) == sizes
        assert Counter(e.members for e in got) == memberships
        seen = set()
        for e in got:
            for u in e.members:
                assert (u, e.t_begin) not in seen
                seen.add((u, e.t_begin))


@criterion(7, "potential exponent boundaries and duration-scale invariance hold exactly")
def test_pap_boundaries_and_invariance(pair_reuse_events):
    for e in pair_reuse_events:
        total = e.size * (e.t_end - e.t_begin) / 60.0
        assert pap(e, 0.0) == float(e.size)
        assert pap(e, 1.0) == total

    events = extract_events(generate(GeneratorConfig(seed=13, n_users=60, n_weeks=2)))
    agg = aggregate_tg(build_tg(events))
    for c in (3, 7):
        scaled = EventSet(
            [
                EventInteraction(
                    e.id, e.ap, e.members, e.t_begin, e.t_begin + c * (e.t_end - e.t_begin)
                )
                for e in events
            ]
        )
        scaled_agg = aggregate_tg(build_tg(scaled))
        assert scaled_agg.degree == agg.degree
        for alpha in (0.0, 0.04, 0.3, 1.0):
            base_scores = user_scores(events, agg, alpha)
            scaled_scores = user_scores(scaled, scaled_agg, alpha)
            base_ars = accuracy_rates(base_scores)
            assert base_ars == accuracy_rates(scaled_scores)
            assert weighted_accuracy(base_scores, base_ars) == weighted_accuracy(
                scaled_scores, accuracy_rates(scaled_scores)
            )


@criterion(8, "perfectly consistent rankings score one for every user and alpha")
def test_perfect_consistency_identity(two_community_events):
    agg = aggregate_tg(build_tg(two_community_events))
    for alpha in alpha_grid(0.01):
        scores = user_scores(two_community_events, agg, alpha)
        ars = accuracy_rates(scores)
        assert all(value == 1.0 for value in ars.values())
        assert weighted_accuracy(scores, ars) == 1.0


@criterion(9, "weekly echo: day seven beats days four to six for 18 of 20 seeds")
def test_weekly_rhythm_emergence():
    started = time.perf_counter()
    passing = 0
    for seed in range(42, 62):
        events = extract_events(generate(GeneratorConfig(seed=seed)))
        deltas = transmission_durations(build_tg(events))
        hist = integral_day_distribution(deltas)
        counts = {int(low): count for low, _high, count, _p in hist.rows()}
        mean_456 = statistics.mean(counts.get(d, 0) for d in (4, 5, 6))
        if counts.get(7, 0) > mean_456:
            passing += 1
    assert passing >= 18, f"only {passing} of 20 seeds show the weekly echo"
    assert time.perf_counter() - started < 120.0


def _fabricate_events(n_events, n_users, seed):
    rng = np.random.default_rng(seed)
    users = [f"u{i}" for i in range(n_users)]
    sizes = rng.integers(2, 5, size=n_events)
    steps = rng.integers(1, 30, size=n_events)
    begins = np.cumsum(steps)
    lengths = rng.integers(60, 600, size=n_events)
    picks = rng.integers(0, n_users, size=(n_events, 4))
    events = []
    for eid in range(n_events):
        members = {users[m] for m in picks[eid, : sizes[eid]]}
        if len(members) < 2:
            members.add(users[(picks[eid, 0] + 1) % n_users])
        events.append(
            EventInteraction(
                eid,
                f"ap{eid % 64}",
                frozenset(members),
                int(begins[eid]),
                int(begins[eid] + lengths[eid]),
            )
        )
    return EventSet(events)


@criterion(10, "builds a transmission graph over 250k events in under 30 seconds")
def test_construction_scales():
    events = _fabricate_events(260_000, 5000, seed=909)
    started = time.perf_counter()
    tg = build_tg(events)
    elapsed = time.perf_counter() - started
    assert tg.n_edges() > 0
    assert elapsed < 30.0, f"construction took {elapsed:.1f}s"
