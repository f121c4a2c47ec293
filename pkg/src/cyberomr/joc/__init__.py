"""JOC engine: ingestion, dispatch policy, batch review, correlation."""

from .correlate import (
    CorrelationGroup,
    UNIT_TYPES,
    UnitReport,
    correlate_reports,
    reports_linked,
)
from .engine import (
    AlertRecord,
    AoR,
    BatchStateError,
    Disposition,
    DualControlError,
    JocEngine,
    ManualClock,
    MonitoringMode,
    ReviewBatch,
    RoutingError,
    WallClock,
)
from .store import EventStore

__all__ = [
    "AlertRecord",
    "AoR",
    "BatchStateError",
    "CorrelationGroup",
    "Disposition",
    "DualControlError",
    "EventStore",
    "JocEngine",
    "ManualClock",
    "MonitoringMode",
    "ReviewBatch",
    "RoutingError",
    "UNIT_TYPES",
    "UnitReport",
    "WallClock",
    "correlate_reports",
    "reports_linked",
]
