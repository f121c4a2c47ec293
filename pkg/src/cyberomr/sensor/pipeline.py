"""Per-AoR sensor pipeline.

One pipeline instance watches one AoR. It is strictly passive: it reads the
telemetry archive (or stream), never writes to the telemetry source, and its
only output is sensor events for the uplink.

A run has two phases. During the learning window the pipeline seeds its asset
table, freezes the control baseline, and warms the traffic baseline; detector
output starts when the learning window ends. Asset registrations made while
learning are reported separately from detection events so that a clean site
coming online does not look like an incident.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field, replace

from ..config import DEFAULT_CONFIG
from ..sim.archive import TelemetryArchive
from ..sim.telemetry import ControlMessage, DeviceLog, FlowRecord, hosts_of
from .anomaly import AnomalyPolicy, detect_volume_anomaly
from .assets import AssetTable, track_assets
from .availability import AvailabilityPolicy, host_activity_buckets, track_availability
from .control import ControlBaseline, learn_control_baseline
from .control import detect_novel_control
from .events import SensorEvent, UlidFactory
from .flows import TrafficSeries, aggregate_flows
from .logs import detect_log_alerts


@dataclass
class PipelineConfig:
    aor_id: str
    host_aors: dict[str, str]
    roles: dict[str, str] = field(default_factory=dict)
    sensor_id: str = ""
    bucket_width: int = DEFAULT_CONFIG["sensor"]["bucket_width"]
    anomaly: AnomalyPolicy = field(default_factory=AnomalyPolicy)
    down_after: int = DEFAULT_CONFIG["sensor"]["availability"]["down_after"]
    learn_window: int = DEFAULT_CONFIG["sensor"]["control"]["min_learning_window"]
    min_learning_window: int = DEFAULT_CONFIG["sensor"]["control"]["min_learning_window"]
    log_alert_codes: list = field(
        default_factory=lambda: list(DEFAULT_CONFIG["sensor"]["log_alert_codes"])
    )
    severity_map: dict = field(
        default_factory=lambda: dict(DEFAULT_CONFIG["severity_map"])
    )

    def __post_init__(self):
        if not self.sensor_id:
            self.sensor_id = f"sensor-{self.aor_id}"

    @classmethod
    def from_platform(cls, aor_id, host_aors, roles=None, config=None, **overrides):
        config = config or DEFAULT_CONFIG
        sensor_cfg = config["sensor"]
        anomaly_cfg = sensor_cfg["anomaly"]
        kwargs = dict(
            aor_id=aor_id,
            host_aors=dict(host_aors),
            roles=dict(roles or {}),
            bucket_width=sensor_cfg["bucket_width"],
            anomaly=AnomalyPolicy(
                window=anomaly_cfg["window"],
                k=anomaly_cfg["k"],
                min_baseline=anomaly_cfg["min_baseline"],
                sigma_floor_frac=anomaly_cfg["sigma_floor_frac"],
            ),
            down_after=sensor_cfg["availability"]["down_after"],
            learn_window=sensor_cfg["control"]["min_learning_window"],
            min_learning_window=sensor_cfg["control"]["min_learning_window"],
            log_alert_codes=list(sensor_cfg["log_alert_codes"]),
            severity_map=dict(config["severity_map"]),
        )
        kwargs.update(overrides)
        return cls(**kwargs)


@dataclass
class PipelineResult:
    aor_id: str
    sensor_id: str
    learn_end_ms: int
    events: list[SensorEvent]             # detection output, ordered by event_id
    learning_events: list[SensorEvent]    # asset registrations during learning
    asset_table: AssetTable
    baseline: ControlBaseline
    series: TrafficSeries

    @property
    def all_events(self) -> list[SensorEvent]:
        return self.learning_events + self.events


class SensorPipeline:
    def __init__(self, config: PipelineConfig):
        self.config = config

    def _relevant(self, records) -> list[tuple[int, object]]:
        aor = self.config.aor_id
        host_aors = self.config.host_aors
        out = []
        for index, record in enumerate(records):
            for host in hosts_of(record):
                if host_aors.get(host) == aor:
                    out.append((index, record))
                    break
        return out

    def _series_flows(self, indexed) -> list[tuple[int, FlowRecord]]:
        """Flows attributed to this AoR's volume series.

        A flow belongs to the AoR of its source host; flows from off-model
        sources are attributed to the destination's AoR so they are counted
        exactly once somewhere.
        """
        aor = self.config.aor_id
        host_aors = self.config.host_aors
        out = []
        for index, record in indexed:
            if not isinstance(record, FlowRecord):
                continue
            src_aor = host_aors.get(record.src)
            if src_aor == aor or (src_aor is None and host_aors.get(record.dst) == aor):
                out.append((index, record))
        return out

    def run(self, archive: TelemetryArchive) -> PipelineResult:
        cfg = self.config
        records = archive.records
        learn_end_ms = archive.epoch_ms + cfg.learn_window * 1000

        indexed = self._relevant(records)
        learn_indexed = [(i, r) for i, r in indexed if r.ts < learn_end_ms]
        detect_indexed = [(i, r) for i, r in indexed if r.ts >= learn_end_ms]

        # -- learning phase ------------------------------------------------
        table = AssetTable()
        learn_ids = UlidFactory(f"{cfg.sensor_id}|learn")
        table, learning_events = track_assets(
            [r for _, r in learn_indexed],
            table,
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            severity_map=cfg.severity_map,
            ids=learn_ids,
        )
        learning_events = _remap_evidence(learning_events, [i for i, _ in learn_indexed])

        learn_ctl = [r for _, r in learn_indexed if isinstance(r, ControlMessage)]
        baseline = learn_control_baseline(
            learn_ctl,
            window=cfg.learn_window,
            start_ms=archive.epoch_ms,
            min_window=cfg.min_learning_window,
        )

        # -- detection phase -----------------------------------------------
        collected: list[SensorEvent] = []

        detect_map = [i for i, _ in detect_indexed]
        table, asset_events = track_assets(
            [r for _, r in detect_indexed],
            table,
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            severity_map=cfg.severity_map,
            ids=UlidFactory(f"{cfg.sensor_id}|assets"),
        )
        collected.extend(_remap_evidence(asset_events, detect_map))

        ctl_indexed = [(i, r) for i, r in detect_indexed if isinstance(r, ControlMessage)]
        novel_events = detect_novel_control(
            [r for _, r in ctl_indexed],
            baseline,
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            severity_map=cfg.severity_map,
            ids=UlidFactory(f"{cfg.sensor_id}|control"),
        )
        collected.extend(_remap_evidence(novel_events, [i for i, _ in ctl_indexed]))

        log_indexed = [(i, r) for i, r in detect_indexed if isinstance(r, DeviceLog)]
        log_events = detect_log_alerts(
            [r for _, r in log_indexed],
            alert_codes=cfg.log_alert_codes,
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            severity_map=cfg.severity_map,
            ids=UlidFactory(f"{cfg.sensor_id}|logs"),
        )
        collected.extend(_remap_evidence(log_events, [i for i, _ in log_indexed]))

        series_indexed = self._series_flows(indexed)
        series = aggregate_flows(
            (r for _, r in series_indexed), cfg.bucket_width, aor_id=cfg.aor_id
        )
        volume_events = detect_volume_anomaly(
            series,
            cfg.anomaly,
            sensor_id=cfg.sensor_id,
            severity_map=cfg.severity_map,
            ids=UlidFactory(f"{cfg.sensor_id}|volume"),
        )
        volume_events = [e for e in volume_events if e.ts >= learn_end_ms]
        collected.extend(_volume_evidence(volume_events, series_indexed, series.width_ms))

        activity = host_activity_buckets((r for _, r in indexed), cfg.bucket_width)
        avail_events = track_availability(
            activity,
            AvailabilityPolicy(down_after=cfg.down_after, bucket_width=cfg.bucket_width),
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            roles=cfg.roles,
            severity_map=cfg.severity_map,
            ids=UlidFactory(f"{cfg.sensor_id}|avail"),
        )
        avail_events = [e for e in avail_events if e.ts >= learn_end_ms]
        collected.extend(_availability_evidence(avail_events, indexed))

        # Reissue ids in timestamp order so event_id order == arrival order.
        collected.sort(key=lambda e: (e.ts, e.kind, sorted(e.detail.items()).__repr__()))
        final_ids = UlidFactory(cfg.sensor_id)
        events = [replace(e, event_id=final_ids.new(e.ts)) for e in collected]

        return PipelineResult(
            aor_id=cfg.aor_id,
            sensor_id=cfg.sensor_id,
            learn_end_ms=learn_end_ms,
            events=events,
            learning_events=learning_events,
            asset_table=table,
            baseline=baseline,
            series=series,
        )


def _remap_evidence(events, index_map) -> list[SensorEvent]:
    """Translate detector-local evidence positions to archive record indices."""
    out = []
    for event in events:
        lo, hi = event.evidence_ref
        if index_map:
            lo = index_map[min(lo, len(index_map) - 1)]
            hi = index_map[min(hi, len(index_map) - 1)]
        out.append(replace(event, evidence_ref=(lo, hi)))
    return out


def _volume_evidence(events, series_indexed, width_ms) -> list[SensorEvent]:
    """Point each volume event at the archive flows inside its bucket.

    For a silence anomaly (empty bucket) the evidence is the last flow before
    the bucket: the absence itself is the observation.
    """
    starts = [r.ts_start for _, r in series_indexed]
    out = []
    for event in events:
        bucket_start = event.detail["bucket_start"]
        lo = bisect_left(starts, bucket_start)
        hi = bisect_right(starts, bucket_start + width_ms - 1)
        if hi > lo:
            ref = (series_indexed[lo][0], series_indexed[hi - 1][0])
        elif lo > 0:
            ref = (series_indexed[lo - 1][0], series_indexed[lo - 1][0])
        else:
            ref = (0, 0)
        out.append(replace(event, evidence_ref=ref))
    return out


def _availability_evidence(events, indexed) -> list[SensorEvent]:
    """Evidence for down/up events: the nearest record mentioning the host."""
    out = []
    for event in events:
        host = event.detail.get("host_id")
        best = None
        for index, record in indexed:
            if host in hosts_of(record):
                if record.ts <= event.ts:
                    best = index
                elif best is None:
                    best = index
                    break
                else:
                    break
        ref = (best, best) if best is not None else (0, 0)
        out.append(replace(event, evidence_ref=ref))
    return out


def run_site_pipelines(
    archive: TelemetryArchive,
    host_aors: dict[str, str],
    roles: dict[str, str] | None = None,
    config: dict | None = None,
    aor_ids=None,
    **overrides,
) -> dict[str, PipelineResult]:
    """Run one pipeline per AoR over the same archive (no shared state)."""
    if aor_ids is None:
        aor_ids = sorted(set(host_aors.values()))
    results = {}
    for aor_id in aor_ids:
        pipeline = SensorPipeline(
            PipelineConfig.from_platform(aor_id, host_aors, roles, config, **overrides)
        )
        results[aor_id] = pipeline.run(archive)
    return results
