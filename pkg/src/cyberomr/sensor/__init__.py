"""Passive per-AoR sensor pipeline and authenticated uplink."""

from .anomaly import AnomalyPolicy, detect_volume_anomaly
from .assets import AssetEntry, AssetTable, track_assets
from .availability import (
    AvailabilityPolicy,
    host_activity_buckets,
    track_availability,
)
from .control import (
    BaselineStateError,
    ControlBaseline,
    LearningWindowError,
    MIN_LEARNING_WINDOW,
    detect_novel_control,
    learn_control_baseline,
)
from .events import EVENT_KINDS, SensorEvent, UlidFactory, severity_for
from .flows import Bucket, TrafficSeries, aggregate_flows
from .logs import detect_log_alerts
from .pipeline import (
    PipelineConfig,
    PipelineResult,
    SensorPipeline,
    run_site_pipelines,
)
from .uplink import (
    Frame,
    FrameAuthError,
    FrameSizeError,
    LinkBudget,
    Uplink,
    UplinkKeyError,
    load_uplink_key,
    parse_frame,
    read_frames,
    window_bits,
)

__all__ = [
    "AnomalyPolicy",
    "AssetEntry",
    "AssetTable",
    "AvailabilityPolicy",
    "BaselineStateError",
    "Bucket",
    "ControlBaseline",
    "EVENT_KINDS",
    "Frame",
    "FrameAuthError",
    "FrameSizeError",
    "LearningWindowError",
    "LinkBudget",
    "MIN_LEARNING_WINDOW",
    "PipelineConfig",
    "PipelineResult",
    "SensorEvent",
    "SensorPipeline",
    "TrafficSeries",
    "UlidFactory",
    "Uplink",
    "UplinkKeyError",
    "aggregate_flows",
    "detect_log_alerts",
    "detect_novel_control",
    "detect_volume_anomaly",
    "host_activity_buckets",
    "learn_control_baseline",
    "load_uplink_key",
    "parse_frame",
    "read_frames",
    "run_site_pipelines",
    "severity_for",
    "track_assets",
    "track_availability",
    "window_bits",
]
