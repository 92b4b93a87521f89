"""Event interactions: maximal constant-membership co-location intervals.

Per access point, connect and disconnect times partition the timeline into
segments of constant membership; every segment with at least two users
becomes one event interaction.  Boundaries are half-open ``[t_begin,
t_end)`` so the partition is exact, and a user drop-and-reconnect at the
same instant does not split an event (membership did not change), while a
recurrence after a gap is a distinct event.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterator

from .sessions import SessionSet


@dataclass(frozen=True)
class EventInteraction:
    id: int
    ap: str
    members: frozenset[str]
    t_begin: int
    t_end: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def duration_minutes(self) -> float:
        return (self.t_end - self.t_begin) / 60.0


def event_size(e: EventInteraction) -> int:
    """Number of involved individuals."""
    return len(e.members)


def event_duration(e: EventInteraction) -> float:
    """Active duration of the event in minutes."""
    return (e.t_end - e.t_begin) / 60.0


@dataclass
class EventSet:
    """Events sorted by (t_begin, id)."""

    events: list[EventInteraction] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.events = sorted(self.events, key=lambda e: (e.t_begin, e.id))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[EventInteraction]:
        return iter(self.events)

    def users(self) -> set[str]:
        return {u for e in self.events for u in e.members}

    @cached_property
    def by_user(self) -> dict[str, list[EventInteraction]]:
        index: dict[str, list[EventInteraction]] = {}
        for e in self.events:
            for u in e.members:
                index.setdefault(u, []).append(e)
        return index

    @cached_property
    def by_id(self) -> dict[int, EventInteraction]:
        return {e.id: e for e in self.events}

    def span(self) -> tuple[int, int]:
        if not self.events:
            raise ValueError("empty event set has no span")
        return (
            min(e.t_begin for e in self.events),
            max(e.t_begin for e in self.events),
        )

    def restrict(self, t1: int, t2: int) -> "EventSet":
        """Events whose begin time falls in the window (t1, t2]."""
        return EventSet([e for e in self.events if t1 < e.t_begin <= t2])


def extract_events(session_set: SessionSet, min_size: int = 2) -> EventSet:
    """Sweep cleaned sessions into event interactions per access point.

    Ids are dense integers assigned in (t_begin, ap, sorted-member-list)
    order, so identical inputs always produce identical event sets.
    """
    by_ap: dict[str, list] = {}
    for s in session_set.sessions:
        by_ap.setdefault(s.ap, []).append(s)

    intervals: list[tuple[int, str, tuple[str, ...], int]] = []
    for ap, sessions in by_ap.items():
        for t_begin, t_end, members in _constant_membership_segments(sessions):
            if len(members) >= min_size:
                intervals.append((t_begin, ap, tuple(sorted(members)), t_end))

    intervals.sort(key=lambda item: (item[0], item[1], item[2]))
    events = [
        EventInteraction(i, ap, frozenset(members), t_begin, t_end)
        for i, (t_begin, ap, members, t_end) in enumerate(intervals)
    ]
    return EventSet(events)


def _constant_membership_segments(sessions):
    """Yield maximal (t_begin, t_end, members) segments at one access point."""
    deltas: dict[int, tuple[list[str], list[str]]] = {}
    for s in sessions:
        deltas.setdefault(s.t_connect, ([], []))[0].append(s.user)
        deltas.setdefault(s.t_disconnect, ([], []))[1].append(s.user)

    current: set[str] = set()
    seg_start = None
    seg_members: frozenset[str] = frozenset()
    for t in sorted(deltas):
        joins, leaves = deltas[t]
        current.difference_update(leaves)
        current.update(joins)
        members = frozenset(current)
        if members == seg_members:
            continue  # zero-gap reconnects do not change membership
        if seg_start is not None and seg_members and seg_start < t:
            yield seg_start, t, seg_members
        seg_start = t
        seg_members = members
    # the last change point is always a disconnect down to an empty set,
    # so no open segment remains


EVENT_HEADER = ("event_id", "ap", "t_begin", "t_end", "size", "members")


def write_events_csv(event_set: EventSet, target) -> None:
    handle, close = _target_handle(target)
    try:
        writer = csv.writer(handle)
        writer.writerow(EVENT_HEADER)
        for e in event_set.events:
            members = ";".join(sorted(e.members))
            writer.writerow([e.id, e.ap, e.t_begin, e.t_end, e.size, members])
    finally:
        if close:
            handle.close()


def read_events_csv(source) -> EventSet:
    handle, close = _source_handle(source)
    try:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != EVENT_HEADER:
            raise ValueError(f"unexpected event header {header!r}")
        events = []
        for row in reader:
            if not row:
                continue
            eid, ap, t_begin, t_end, _size, members = row
            events.append(
                EventInteraction(
                    int(eid), ap, frozenset(members.split(";")), int(t_begin), int(t_end)
                )
            )
    finally:
        if close:
            handle.close()
    return EventSet(events)


def _target_handle(target):
    if isinstance(target, (str, Path)):
        return Path(target).open("w", newline="", encoding="utf-8"), True
    return target, False


def _source_handle(source):
    if isinstance(source, (str, Path)):
        return Path(source).open("r", newline="", encoding="utf-8"), True
    return source, False
