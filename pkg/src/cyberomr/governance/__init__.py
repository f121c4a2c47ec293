"""Technical assessment scoring and ceasefire compliance ledger."""

from .assessment import (
    AssessmentValidationError,
    Recommendation,
    SCORE_RANGE,
    TechnicalAssessment,
    score_assessment,
)
from .compliance import (
    COOPERATION_LEVELS,
    ComplianceLedger,
    ComplianceObservation,
    ComplianceTrend,
    ObservationError,
    UnknownTermError,
)

__all__ = [
    "AssessmentValidationError",
    "COOPERATION_LEVELS",
    "ComplianceLedger",
    "ComplianceObservation",
    "ComplianceTrend",
    "ObservationError",
    "Recommendation",
    "SCORE_RANGE",
    "TechnicalAssessment",
    "UnknownTermError",
    "score_assessment",
]
