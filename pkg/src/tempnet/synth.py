"""Synthetic session-log generator with weekly schedule rhythms.

Users enroll in a few weekly courses, each a fixed (access point, weekday,
slot) meeting of two teaching hours; attended meetings become sessions
with jittered boundaries, and sparse off-schedule sessions with
heavy-tailed durations add background noise.  The weekly timetable is what
produces the characteristic one-week echo in transmission durations, and
it can be switched off as a negative control.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .sessions import SessionSet, Session, clean_sessions

SECONDS_PER_DAY = 86400
SECONDS_PER_WEEK = 7 * SECONDS_PER_DAY
CLASS_MINUTES = 120
SLOT_GAP_MINUTES = 10
DAY_START_MINUTES = 8 * 60
TEACHING_DAYS = 5
FREE_SCALE_MINUTES = 15.0
FREE_CAP_MINUTES = 360.0

# Monday 00:00 local time at UTC+8
DEFAULT_START_EPOCH = 1255881600


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 42
    n_users: int = 200
    n_aps: int = 10
    n_weeks: int = 4
    slots_per_day: int = 5
    attendance_prob: float = 0.85
    session_jitter_minutes: float = 5.0
    heavy_tail_exponent: float = 2.5
    n_courses: int = 0  # 0 picks one course per access point and weekday
    max_courses_per_user: int = 2
    free_sessions_per_week: float = 0.5
    weekly_schedule: bool = True
    start_epoch: int = DEFAULT_START_EPOCH
    tz_offset_minutes: int = 480

    def validate(self) -> "GeneratorConfig":
        for name in ("n_users", "n_aps", "n_weeks", "slots_per_day", "max_courses_per_user"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 0.0 <= self.attendance_prob <= 1.0:
            raise ValueError(f"attendance_prob must lie in [0, 1], got {self.attendance_prob}")
        if self.session_jitter_minutes < 0:
            raise ValueError("session_jitter_minutes must be non-negative")
        if self.heavy_tail_exponent <= 1.0:
            raise ValueError("heavy_tail_exponent must exceed 1")
        if self.free_sessions_per_week < 0:
            raise ValueError("free_sessions_per_week must be non-negative")
        max_slots = (1440 - DAY_START_MINUTES) // (CLASS_MINUTES + SLOT_GAP_MINUTES)
        if self.slots_per_day > max_slots:
            raise ValueError(f"slots_per_day must be <= {max_slots} to fit in a day")
        return self

    @classmethod
    def from_file(cls, path) -> "GeneratorConfig":
        """Load a flat key=value config file ('#' starts a comment)."""
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"cannot parse config line {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in types:
                raise ValueError(f"unknown generator option {key!r}")
            values[key] = _coerce(value, types[key])
        return cls(**values).validate()


def _coerce(text: str, type_name: str):
    if type_name == "bool":
        if text.lower() in ("true", "1", "yes"):
            return True
        if text.lower() in ("false", "0", "no"):
            return False
        raise ValueError(f"expected a boolean, got {text!r}")
    if type_name == "int":
        return int(text)
    if type_name == "float":
        return float(text)
    return text


def generate(cfg: GeneratorConfig) -> SessionSet:
    """Generate a deterministic, already-clean session set.

    The random stream never depends on ``start_epoch``, so shifting the
    start by exactly one week shifts every session by the same amount.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    users = [f"u{i:04d}" for i in range(cfg.n_users)]
    aps = [f"ap{i:02d}" for i in range(cfg.n_aps)]

    raw: list[Session] = []
    if cfg.weekly_schedule:
        courses = _sample_courses(cfg, rng)
        roster: list[list[str]] = [[] for _ in courses]
        for user in users:
            k = int(rng.integers(1, cfg.max_courses_per_user + 1))
            k = min(k, len(courses))
            for course_idx in rng.choice(len(courses), size=k, replace=False):
                roster[int(course_idx)].append(user)
        # associations cluster at slot boundaries, so a meeting starts on
        # the dot and the whole cohort shares its realized end (the
        # lecture runs over or wraps up early); one meeting is then one
        # co-location interval instead of a stack of per-user slivers
        jitter = cfg.session_jitter_minutes * 60.0
        for (ap_idx, day, slot), enrolled in zip(courses, roster):
            scheduled = (
                day * SECONDS_PER_DAY
                + (DAY_START_MINUTES + slot * (CLASS_MINUTES + SLOT_GAP_MINUTES)) * 60
            )
            for week in range(cfg.n_weeks):
                overrun = int(round(rng.uniform(-jitter, jitter)))
                t_connect = cfg.start_epoch + week * SECONDS_PER_WEEK + scheduled
                t_disconnect = t_connect + CLASS_MINUTES * 60 + overrun
                if t_connect >= t_disconnect:
                    continue
                for user in enrolled:
                    if rng.random() < cfg.attendance_prob:
                        raw.append(Session(user, aps[ap_idx], t_connect, t_disconnect))

    for user in users:
        for week in range(cfg.n_weeks):
            count = int(rng.poisson(cfg.free_sessions_per_week))
            for _ in range(count):
                offset = int(round(rng.uniform(0, SECONDS_PER_WEEK)))
                minutes = FREE_SCALE_MINUTES * (1.0 + rng.pareto(cfg.heavy_tail_exponent - 1.0))
                minutes = max(1.0, min(FREE_CAP_MINUTES, minutes))
                ap = aps[int(rng.integers(cfg.n_aps))]
                t_connect = cfg.start_epoch + week * SECONDS_PER_WEEK + offset
                raw.append(Session(user, ap, t_connect, t_connect + int(round(minutes * 60))))

    # same truncation rule as ingest cleaning, so the output is clean-stable
    return clean_sessions(SessionSet(raw, cfg.tz_offset_minutes))


def _sample_courses(cfg: GeneratorConfig, rng) -> list[tuple[int, int, int]]:
    grid = [
        (ap, day, slot)
        for ap in range(cfg.n_aps)
        for day in range(TEACHING_DAYS)
        for slot in range(cfg.slots_per_day)
    ]
    n_courses = cfg.n_courses if cfg.n_courses > 0 else cfg.n_aps * TEACHING_DAYS
    n_courses = min(n_courses, len(grid))
    picked = rng.choice(len(grid), size=n_courses, replace=False)
    return [grid[int(i)] for i in sorted(picked)]


def shifted_by_weeks(cfg: GeneratorConfig, weeks: int) -> GeneratorConfig:
    return replace(cfg, start_epoch=cfg.start_epoch + weeks * SECONDS_PER_WEEK)
