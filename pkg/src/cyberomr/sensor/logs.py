"""Device-log alerting.

Structural devices (routers, firewalls, controllers) forward their logs to the
sensor; a configurable code-match list decides which entries become events.
The match list is our construction: which log rules matter is site-specific,
so it ships as config rather than code.
"""

from ..config import DEFAULT_CONFIG
from .events import SensorEvent, UlidFactory, severity_for


def detect_log_alerts(
    logs,
    alert_codes=None,
    aor_id: str = "",
    sensor_id: str = "",
    severity_map: dict | None = None,
    ids: UlidFactory | None = None,
    record_offset: int = 0,
) -> list[SensorEvent]:
    """Emit a device-log-alert for each log entry whose code is on the list."""
    if alert_codes is None:
        alert_codes = DEFAULT_CONFIG["sensor"]["log_alert_codes"]
    alert_codes = set(alert_codes)
    ids = ids or UlidFactory()
    sensor_id = sensor_id or f"sensor-{aor_id}"
    events = []
    for index, log in enumerate(logs):
        if log.code not in alert_codes:
            continue
        events.append(
            SensorEvent(
                event_id=ids.new(log.ts),
                aor_id=aor_id,
                sensor_id=sensor_id,
                kind="device-log-alert",
                ts=log.ts,
                severity=severity_for("device-log-alert", severity_map=severity_map),
                detail={"host_id": log.host_id, "level": log.level, "code": log.code},
                evidence_ref=(record_offset + index, record_offset + index),
            )
        )
    return events
