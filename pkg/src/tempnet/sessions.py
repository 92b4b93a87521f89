"""Session log parsing, validation, and cleaning.

A session is one device's contiguous attachment to one access point.  Raw
logs arrive as CSV rows ``user,ap,t_connect,t_disconnect`` with integer
epoch-second timestamps; parsing keeps every well-formed row and reports
the rest, and cleaning resolves same-user overlaps so that downstream
co-location extraction can assume one attachment per user at a time.
"""

from __future__ import annotations

import csv
import gzip
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import IO, Iterator

DEFAULT_TZ_OFFSET_MINUTES = 480

SESSION_HEADER = ("user", "ap", "t_connect", "t_disconnect")
REJECT_HEADER = ("line", "reason")


@dataclass(frozen=True, slots=True)
class Session:
    user: str
    ap: str
    t_connect: int
    t_disconnect: int

    @property
    def duration_seconds(self) -> int:
        return self.t_disconnect - self.t_connect


@dataclass(frozen=True, slots=True)
class RejectedRow:
    line: int
    reason: str


@dataclass
class SessionSet:
    """Sessions sorted by (t_connect, user, ap) plus the local-day offset.

    ``tz_offset_minutes`` carries the offset used to map epoch seconds to
    local calendar days for circadian analyses.
    """

    sessions: list[Session] = field(default_factory=list)
    tz_offset_minutes: int = DEFAULT_TZ_OFFSET_MINUTES

    def __len__(self) -> int:
        return len(self.sessions)

    def __iter__(self) -> Iterator[Session]:
        return iter(self.sessions)

    def users(self) -> set[str]:
        return {s.user for s in self.sessions}

    def span(self) -> tuple[int, int]:
        if not self.sessions:
            raise ValueError("empty session set has no span")
        return (
            min(s.t_connect for s in self.sessions),
            max(s.t_disconnect for s in self.sessions),
        )


@dataclass
class ParseResult:
    sessions: SessionSet
    rejects: list[RejectedRow]


def _sort_key(s: Session) -> tuple[int, str, str]:
    return (s.t_connect, s.user, s.ap)


def _open_source(source) -> IO[str]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        raw = path.open("rb")
    elif isinstance(source, io.TextIOBase):
        return source
    else:
        raw = source
    head = raw.read(2)
    raw.seek(0)
    if head == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.GzipFile(fileobj=raw), encoding="utf-8")
    return io.TextIOWrapper(raw, encoding="utf-8")


def parse_sessions(source, tz_offset_minutes: int = DEFAULT_TZ_OFFSET_MINUTES) -> ParseResult:
    """Parse a session CSV (optionally gzipped) into a sorted SessionSet.

    Malformed rows never abort the parse; each is recorded with its
    1-based line number and a reason.  An unreadable source or a wrong
    header is fatal.
    """
    stream = _open_source(source)
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("session source is empty, expected a header row")
    if tuple(h.strip() for h in header) != SESSION_HEADER:
        raise ValueError(f"unexpected header {header!r}, expected {','.join(SESSION_HEADER)}")

    sessions: list[Session] = []
    rejects: list[RejectedRow] = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        reason = None
        if len(row) != 4:
            reason = f"expected 4 fields, got {len(row)}"
        else:
            user, ap, t_c, t_d = (cell.strip() for cell in row)
            if not user or not ap:
                reason = "empty user or ap"
            else:
                try:
                    t_connect, t_disconnect = int(t_c), int(t_d)
                except ValueError:
                    reason = "timestamps must be integer epoch seconds"
                else:
                    if t_connect >= t_disconnect:
                        reason = "non-positive duration"
        if reason is None:
            sessions.append(Session(user, ap, t_connect, t_disconnect))
        else:
            rejects.append(RejectedRow(lineno, reason))

    sessions.sort(key=_sort_key)
    return ParseResult(SessionSet(sessions, tz_offset_minutes), rejects)


def clean_sessions(raw: SessionSet) -> SessionSet:
    """Resolve same-user overlaps by truncating the earlier session.

    The later connect wins (the device roamed); a session truncated to
    zero length is dropped.  Cleaning is total and idempotent.
    """
    by_user: dict[str, list[Session]] = {}
    for s in sorted(raw.sessions, key=_sort_key):
        by_user.setdefault(s.user, []).append(s)

    cleaned: list[Session] = []
    for sessions in by_user.values():
        for cur, nxt in zip(sessions, sessions[1:]):
            if nxt.t_connect < cur.t_disconnect:
                cur = replace(cur, t_disconnect=nxt.t_connect)
            if cur.t_connect < cur.t_disconnect:
                cleaned.append(cur)
        last = sessions[-1]
        if last.t_connect < last.t_disconnect:
            cleaned.append(last)

    cleaned.sort(key=_sort_key)
    return SessionSet(cleaned, raw.tz_offset_minutes)


def write_sessions_csv(session_set: SessionSet, target) -> None:
    with _open_target(target) as handle:
        writer = csv.writer(handle)
        writer.writerow(SESSION_HEADER)
        for s in session_set.sessions:
            writer.writerow([s.user, s.ap, s.t_connect, s.t_disconnect])


def write_rejects_csv(rejects: list[RejectedRow], target) -> None:
    with _open_target(target) as handle:
        writer = csv.writer(handle)
        writer.writerow(REJECT_HEADER)
        for r in rejects:
            writer.writerow([r.line, r.reason])


def _open_target(target):
    if isinstance(target, (str, Path)):
        return Path(target).open("w", newline="", encoding="utf-8")
    return _NonClosing(target)


class _NonClosing:
    def __init__(self, handle):
        self._handle = handle

    def __enter__(self):
        return self._handle

    def __exit__(self, *exc):
        return False
