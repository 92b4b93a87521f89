"""Scikit-learn style wrappers around the pipeline stages.

Each stage is a stateless transformer over the toolkit's domain objects
(session sets, event sets, transmission graphs), so the whole analysis
composes with :class:`sklearn.pipeline.Pipeline`, and the hub ranker is a
fit/predict estimator whose parameters participate in ``get_params`` /
``set_params`` and cloning.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .events import EventSet, extract_events
from .ranking import RankingReport, build_report, mpap, pap
from .sessions import SessionSet, clean_sessions
from .transmission import aggregate_tg, build_tg
from .validation import check_event_set, check_session_set


class SessionCleaner(BaseEstimator, TransformerMixin):
    """Resolve same-user session overlaps; a no-op on already-clean logs."""

    def fit(self, X, y=None):
        return self

    def transform(self, X: SessionSet) -> SessionSet:
        if not isinstance(X, SessionSet):
            raise TypeError(f"expected a SessionSet, got {type(X).__name__}")
        cleaned = clean_sessions(X)
        check_session_set(cleaned)
        return cleaned


class EventExtractor(BaseEstimator, TransformerMixin):
    """Turn cleaned sessions into co-location event interactions.

    Parameters
    ----------
    min_size : int, default=2
        Smallest co-location group that counts as an interaction.
    """

    def __init__(self, min_size: int = 2):
        self.min_size = min_size

    def fit(self, X, y=None):
        return self

    def transform(self, X: SessionSet) -> EventSet:
        if not isinstance(X, SessionSet):
            raise TypeError(f"expected a SessionSet, got {type(X).__name__}")
        check_session_set(X)
        if self.min_size < 2:
            raise ValueError(f"min_size must be >= 2, got {self.min_size}")
        return extract_events(X, min_size=self.min_size)


class TransmissionGraphBuilder(BaseEstimator, TransformerMixin):
    """Build the transmission graph, optionally its aggregated view.

    Parameters
    ----------
    aggregate : bool, default=False
        Return the undirected multi-edge-free aggregate instead of the
        raw time-labeled graph.
    """

    def __init__(self, aggregate: bool = False):
        self.aggregate = aggregate

    def fit(self, X, y=None):
        return self

    def transform(self, X: EventSet):
        if not isinstance(X, EventSet):
            raise TypeError(f"expected an EventSet, got {type(X).__name__}")
        check_event_set(X)
        tg = build_tg(X)
        return aggregate_tg(tg) if self.aggregate else tg


class TemporalHubRanker(BaseEstimator):
    """Rank users by maximum participation activity potential.

    Fitting computes temporal degrees from the transmission graph of the
    given events, scores every user, and either uses the fixed ``alpha``
    or picks the grid value that best reproduces the temporal-degree
    ranking.

    Parameters
    ----------
    alpha : float or None, default=None
        Mixing exponent between total active duration and size.  None
        optimizes over the grid.
    grid_step : float, default=0.01
        Grid resolution used when optimizing alpha.
    top_k : int, default=10
        How many users ``predict`` returns.

    Attributes
    ----------
    report_ : RankingReport
        Scores, accuracy rates, rank table, and the weighted-accuracy
        curve from fitting.
    alpha_ : float
        The alpha actually used for scoring.
    """

    def __init__(self, alpha: float | None = None, grid_step: float = 0.01, top_k: int = 10):
        self.alpha = alpha
        self.grid_step = grid_step
        self.top_k = top_k

    def fit(self, X: EventSet, y=None):
        if not isinstance(X, EventSet):
            raise TypeError(f"expected an EventSet, got {type(X).__name__}")
        check_event_set(X)
        self.report_: RankingReport = build_report(
            X, alpha=self.alpha, grid_step=self.grid_step
        )
        self.alpha_ = self.report_.alpha_star
        return self

    def predict(self, X: EventSet | None = None) -> list[str]:
        """Top-k users by MPAP, on the fitted events or on new ones."""
        self._check_fitted()
        if X is None:
            return self.report_.top_users(self.top_k)
        check_event_set(X)
        ranked = sorted(
            ((mpap(u, X, self.alpha_), u) for u in X.users()),
            key=lambda item: (-item[0], item[1]),
        )
        return [u for _, u in ranked[: self.top_k]]

    def score(self, X: EventSet | None = None, y=None) -> float:
        """Weighted ranking accuracy at the fitted alpha."""
        self._check_fitted()
        if X is None:
            return dict(self.report_.f_curve)[self.alpha_]
        report = build_report(X, alpha=self.alpha_)
        return report.f_curve[0][1]

    def event_potential(self, e) -> float:
        self._check_fitted()
        return pap(e, self.alpha_)

    def _check_fitted(self) -> None:
        if not hasattr(self, "report_"):
            raise RuntimeError("this ranker is not fitted yet, call fit first")
