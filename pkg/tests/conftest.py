import pytest

from tempnet.events import extract_events
from tempnet.sessions import Session, SessionSet


@pytest.fixture
def handoff_sessions():
    """Two users meet at one AP, then one of them joins two others elsewhere.

    Produces events {a,b}@100 and {b,c,d}@200: b carries the contact, so a
    reaches c and d but nobody reaches a except b.
    """
    return SessionSet(
        sorted(
            [
                Session("a", "ap1", 100, 200),
                Session("b", "ap1", 100, 200),
                Session("b", "ap2", 200, 300),
                Session("c", "ap2", 200, 300),
                Session("d", "ap2", 200, 300),
            ],
            key=lambda s: (s.t_connect, s.user, s.ap),
        )
    )


@pytest.fixture
def handoff_events(handoff_sessions):
    return extract_events(handoff_sessions)


@pytest.fixture
def pair_reuse_sessions():
    """Three users alternating in pairs at one AP: AB, BC, AC, AB, BC.

    Five two-user events whose per-user nearest-prior structure yields
    seven transmission edges.
    """
    return SessionSet(
        sorted(
            [
                Session("A", "ap1", 0, 600),
                Session("B", "ap1", 0, 600),
                Session("B", "ap1", 1200, 1800),
                Session("C", "ap1", 1200, 1800),
                Session("A", "ap1", 3600, 4800),
                Session("C", "ap1", 3600, 4200),
                Session("B", "ap1", 4200, 5400),
                Session("C", "ap1", 4800, 5400),
            ],
            key=lambda s: (s.t_connect, s.user, s.ap),
        )
    )


@pytest.fixture
def pair_reuse_events(pair_reuse_sessions):
    return extract_events(pair_reuse_sessions)


@pytest.fixture
def triple_overlap_sessions():
    """Three sessions at one AP with a short third-user visit in the middle."""
    return SessionSet(
        [
            Session("u1", "a", 0, 100),
            Session("u2", "a", 0, 100),
            Session("u3", "a", 40, 60),
        ]
    )


@pytest.fixture
def two_community_sessions():
    """A recurring triple plus an unrelated short pair.

    The triple's users end with temporal degree 2 and the pair's users
    with 0, and the potential ranking agrees with that ordering at every
    alpha: sizes order the same way as degrees, and so do total
    durations.
    """
    return SessionSet(
        sorted(
            [
                Session("x1", "apX", 0, 600),
                Session("x2", "apX", 0, 600),
                Session("x3", "apX", 0, 600),
                Session("x1", "apX", 1200, 1800),
                Session("x2", "apX", 1200, 1800),
                Session("x3", "apX", 1200, 1800),
                Session("x1", "apX", 2400, 3000),
                Session("x2", "apX", 2400, 3000),
                Session("x3", "apX", 2400, 3000),
                Session("y1", "apY", 100, 160),
                Session("y2", "apY", 100, 160),
            ],
            key=lambda s: (s.t_connect, s.user, s.ap),
        )
    )


@pytest.fixture
def two_community_events(two_community_sessions):
    return extract_events(two_community_sessions)
