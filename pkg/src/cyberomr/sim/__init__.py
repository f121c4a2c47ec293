"""Deterministic conflict-site telemetry simulator."""

from .archive import TelemetryArchive, archive_from_records, read_archive, read_records
from .engine import run
from .model import (
    AttackScenario,
    HostSpec,
    LinkSpec,
    OverlappingTakedownError,
    SiteModel,
    SiteValidationError,
    TrafficProfile,
    UnknownTargetError,
    inject_attack,
)
from .telemetry import (
    Annotation,
    ControlMessage,
    DeviceLog,
    FlowRecord,
    RecordFormatError,
    hosts_of,
    record_from_line,
    record_to_line,
)
from .template import OFFICE_UPLINK, POWER_GRID_AORS, build_site, load_site_config

__all__ = [
    "Annotation",
    "AttackScenario",
    "ControlMessage",
    "DeviceLog",
    "FlowRecord",
    "HostSpec",
    "LinkSpec",
    "OFFICE_UPLINK",
    "OverlappingTakedownError",
    "POWER_GRID_AORS",
    "RecordFormatError",
    "SiteModel",
    "SiteValidationError",
    "TelemetryArchive",
    "TrafficProfile",
    "UnknownTargetError",
    "archive_from_records",
    "build_site",
    "hosts_of",
    "inject_attack",
    "load_site_config",
    "read_archive",
    "read_records",
    "record_from_line",
    "record_to_line",
    "run",
]
