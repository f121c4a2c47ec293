"""Host availability tracking by traffic absence.

A previously-observed host that produces no records for `down_after`
consecutive buckets is declared down; the next observation brings it back up.
Hosts never observed cannot go down. Events alternate down/up per host.
"""

from dataclasses import dataclass

from ..sim.telemetry import hosts_of
from .events import SensorEvent, UlidFactory, severity_for


@dataclass(frozen=True)
class AvailabilityPolicy:
    down_after: int = 5     # consecutive empty buckets
    bucket_width: int = 60  # seconds

    def validate(self) -> None:
        if self.down_after < 1:
            raise ValueError(f"down_after must be >= 1, got {self.down_after}")
        if self.bucket_width <= 0:
            raise ValueError(f"bucket_width must be > 0, got {self.bucket_width}")


def host_activity_buckets(records, bucket_width: int) -> dict[int, set[str]]:
    """Map bucket_start (UTC ms) to the set of hosts active in that bucket."""
    width_ms = bucket_width * 1000
    activity: dict[int, set[str]] = {}
    for record in records:
        start = (record.ts // width_ms) * width_ms
        active = activity.setdefault(start, set())
        active.update(hosts_of(record))
    return activity


def track_availability(
    activity: dict[int, set[str]],
    policy: AvailabilityPolicy | None = None,
    aor_id: str = "",
    sensor_id: str = "",
    roles: dict[str, str] | None = None,
    severity_map: dict | None = None,
    ids: UlidFactory | None = None,
) -> list[SensorEvent]:
    """Scan the bucketized activity map and emit host-down / host-up events.

    ``activity`` is as returned by :func:`host_activity_buckets`; empty buckets
    between occupied ones count as silence for every host.
    """
    policy = policy or AvailabilityPolicy()
    policy.validate()
    ids = ids or UlidFactory()
    sensor_id = sensor_id or f"sensor-{aor_id}"
    roles = roles or {}
    if not activity:
        return []

    width_ms = policy.bucket_width * 1000
    first = min(activity)
    last = max(activity)

    empty_streak: dict[str, int] = {}
    is_down: dict[str, bool] = {}
    events = []
    for start in range(first, last + width_ms, width_ms):
        active = activity.get(start, set())
        for host in active:
            if is_down.get(host):
                is_down[host] = False
                events.append(
                    SensorEvent(
                        event_id=ids.new(start),
                        aor_id=aor_id,
                        sensor_id=sensor_id,
                        kind="host-up",
                        ts=start,
                        severity=severity_for("host-up", severity_map=severity_map),
                        detail={"host_id": host},
                    )
                )
            empty_streak[host] = 0
        for host in empty_streak:
            if host in active or is_down.get(host):
                continue
            empty_streak[host] += 1
            if empty_streak[host] >= policy.down_after:
                is_down[host] = True
                down_ts = start + width_ms  # conclusion point: end of this bucket
                events.append(
                    SensorEvent(
                        event_id=ids.new(down_ts),
                        aor_id=aor_id,
                        sensor_id=sensor_id,
                        kind="host-down",
                        ts=down_ts,
                        severity=severity_for(
                            "host-down", role=roles.get(host), severity_map=severity_map
                        ),
                        detail={
                            "host_id": host,
                            "empty_buckets": empty_streak[host],
                            "role": roles.get(host, "unknown"),
                        },
                    )
                )
    return events
