"""Technical assessment scoring for monitoring-site requests.

Each requested site is scored on three 0-3 ordinal criteria: contribution to
peace, local support, and capacity to act. Each criterion is necessary, so
any zero denies the request outright. Otherwise the site is monitored; batch
mode every 24 hours is the default, upgraded to real-time only when a cyber
event at the site could harm civilians or destabilise the state. The scoring
rule is a pure function so the same assessment always yields the same
recommendation.
"""

from dataclasses import dataclass

from ..joc.engine import MonitoringMode

SCORE_RANGE = (0, 1, 2, 3)


class AssessmentValidationError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid assessment: " + "; ".join(self.problems))


@dataclass(frozen=True)
class TechnicalAssessment:
    site_id: str
    peace_contribution: int   # 0-3
    local_support: int        # 0-3: are staff forthcoming with assistance?
    capacity: int             # 0-3: funding, expertise, equipment
    civilian_harm_risk: bool  # threat to life, state collapse or destabilisation
    justification: str = ""

    def validate(self) -> None:
        problems = []
        for name in ("peace_contribution", "local_support", "capacity"):
            value = getattr(self, name)
            if value not in SCORE_RANGE:
                problems.append(f"{name} must be an integer in 0..3, got {value!r}")
        extremes = [
            name
            for name in ("peace_contribution", "local_support", "capacity")
            if getattr(self, name) in (0, 3)
        ]
        if extremes and not self.justification.strip():
            problems.append(
                f"scores of 0 or 3 require a justification ({', '.join(extremes)})"
            )
        if problems:
            raise AssessmentValidationError(problems)

    def to_dict(self) -> dict:
        return {
            "site_id": self.site_id,
            "peace_contribution": self.peace_contribution,
            "local_support": self.local_support,
            "capacity": self.capacity,
            "civilian_harm_risk": self.civilian_harm_risk,
            "justification": self.justification,
        }


@dataclass(frozen=True)
class Recommendation:
    decision: str  # "deny" | "monitor"
    mode: MonitoringMode | None = None

    DENY = "deny"
    MONITOR = "monitor"

    def __str__(self) -> str:
        if self.decision == self.DENY:
            return "Deny"
        if self.mode and self.mode.is_real_time:
            return "Monitor (real-time)"
        hours = self.mode.interval_hours if self.mode else 24
        return f"Monitor (batch every {hours:g}h)"

    def to_dict(self) -> dict:
        return {
            "decision": self.decision,
            "mode": self.mode.to_dict() if self.mode else None,
            "label": str(self),
        }


def score_assessment(assessment: TechnicalAssessment) -> Recommendation:
    """Pure scoring rule: any zero denies; harm risk selects real-time."""
    assessment.validate()
    if 0 in (assessment.peace_contribution, assessment.local_support, assessment.capacity):
        return Recommendation(decision=Recommendation.DENY)
    if assessment.civilian_harm_risk:
        return Recommendation(decision=Recommendation.MONITOR, mode=MonitoringMode.real_time())
    return Recommendation(decision=Recommendation.MONITOR, mode=MonitoringMode.batch(24.0))
