"""tempnet: temporal contact analytics for co-location session logs."""

from .contacts import (
    CurvePoint,
    JointDegreeDistribution,
    StaticContactNetwork,
    TemporalContactNetwork,
    build_acn,
    build_tcn,
    joint_degree_distribution,
    reachability,
    reachability_curves,
)
from .estimators import (
    EventExtractor,
    SessionCleaner,
    TemporalHubRanker,
    TransmissionGraphBuilder,
)
from .events import (
    EventInteraction,
    EventSet,
    event_duration,
    event_size,
    extract_events,
    read_events_csv,
    write_events_csv,
)
from .ranking import (
    RankingReport,
    UserScore,
    accuracy_by_rank,
    accuracy_rate,
    accuracy_rates,
    build_report,
    mpap,
    optimize_alpha,
    pap,
    temporal_degree,
    user_scores,
    weighted_accuracy,
)
from .sessions import (
    RejectedRow,
    Session,
    SessionSet,
    clean_sessions,
    parse_sessions,
    write_sessions_csv,
)
from .stats import (
    Histogram,
    ShuffleConfig,
    ShuffleResult,
    artificial_deseason,
    degree_cv,
    delta_distribution,
    duration_distribution,
    integral_day_distribution,
    natural_deseason,
    size_distribution,
)
from .synth import GeneratorConfig, generate
from .transmission import (
    AggregatedTransmissionGraph,
    TransmissionEdge,
    TransmissionGraph,
    aggregate_tg,
    build_tg,
    transmission_durations,
)
from .validation import InvariantViolation

__version__ = "0.1.0"

__all__ = [
    "AggregatedTransmissionGraph",
    "CurvePoint",
    "EventExtractor",
    "EventInteraction",
    "EventSet",
    "GeneratorConfig",
    "Histogram",
    "InvariantViolation",
    "JointDegreeDistribution",
    "RankingReport",
    "RejectedRow",
    "Session",
    "SessionCleaner",
    "SessionSet",
    "ShuffleConfig",
    "ShuffleResult",
    "StaticContactNetwork",
    "TemporalContactNetwork",
    "TemporalHubRanker",
    "TransmissionEdge",
    "TransmissionGraph",
    "TransmissionGraphBuilder",
    "UserScore",
    "accuracy_by_rank",
    "accuracy_rate",
    "accuracy_rates",
    "aggregate_tg",
    "artificial_deseason",
    "build_acn",
    "build_report",
    "build_tcn",
    "build_tg",
    "clean_sessions",
    "degree_cv",
    "delta_distribution",
    "duration_distribution",
    "event_duration",
    "event_size",
    "extract_events",
    "generate",
    "integral_day_distribution",
    "joint_degree_distribution",
    "mpap",
    "natural_deseason",
    "optimize_alpha",
    "pap",
    "parse_sessions",
    "reachability",
    "reachability_curves",
    "read_events_csv",
    "size_distribution",
    "temporal_degree",
    "transmission_durations",
    "user_scores",
    "weighted_accuracy",
    "write_events_csv",
    "write_sessions_csv",
]
