"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

from typing import Iterable


class InvariantViolation(Exception):
    """Raised when structured input breaks one of its documented invariants."""


def check_alpha(alpha: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    return float(alpha)


def check_window(window: tuple[int, int]) -> tuple[int, int]:
    t1, t2 = window
    if t1 >= t2:
        raise ValueError(f"window must satisfy t1 < t2, got ({t1}, {t2})")
    return (int(t1), int(t2))


def check_positive(value, name: str):
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def check_session_set(session_set) -> None:
    """Validate ordering and per-user exclusivity of a cleaned SessionSet."""
    prev_key = None
    last_seen: dict[str, int] = {}
    for s in session_set.sessions:
        if s.t_connect >= s.t_disconnect:
            raise InvariantViolation(f"zero or negative length session: {s}")
        key = (s.t_connect, s.user, s.ap)
        if prev_key is not None and key < prev_key:
            raise InvariantViolation("sessions are not sorted by (t_connect, user, ap)")
        prev_key = key
        if s.user in last_seen and s.t_connect < last_seen[s.user]:
            raise InvariantViolation(
                f"user {s.user!r} has overlapping sessions around t={s.t_connect}"
            )
        last_seen[s.user] = max(last_seen.get(s.user, s.t_disconnect), s.t_disconnect)


def check_event_set(event_set, exclusive: bool = False) -> None:
    """Validate structural event invariants.

    With ``exclusive=True`` additionally asserts that no user sits in two
    events at the same instant; begin-time-shuffled event sets keep ids,
    sizes and durations but are allowed to violate interval exclusivity,
    so that check is opt-in.
    """
    seen_ids = set()
    prev_key = None
    for e in event_set.events:
        if e.id in seen_ids:
            raise InvariantViolation(f"duplicate event id {e.id}")
        seen_ids.add(e.id)
        if len(e.members) < 2:
            raise InvariantViolation(f"event {e.id} has fewer than 2 members")
        if e.t_begin >= e.t_end:
            raise InvariantViolation(f"event {e.id} has non-positive duration")
        key = (e.t_begin, e.id)
        if prev_key is not None and key < prev_key:
            raise InvariantViolation("events are not sorted by (t_begin, id)")
        prev_key = key
    if exclusive:
        _check_member_exclusivity(event_set.events)


def _check_member_exclusivity(events: Iterable) -> None:
    per_user: dict[str, list[tuple[int, int, int]]] = {}
    for e in events:
        for u in e.members:
            per_user.setdefault(u, []).append((e.t_begin, e.t_end, e.id))
    for u, spans in per_user.items():
        spans.sort()
        for (b1, e1, i1), (b2, _e2, i2) in zip(spans, spans[1:]):
            if b2 < e1:
                raise InvariantViolation(
                    f"user {u!r} is in events {i1} and {i2} at the same instant"
                )
