"""Sensor event type, sortable event ids, and severity assignment."""

import json
import random
from dataclasses import dataclass, field

from ..config import DEFAULT_CONFIG

EVENT_KINDS = (
    "volume-anomaly",
    "new-asset",
    "host-down",
    "host-up",
    "novel-control",
    "device-log-alert",
)

SEVERITIES = ("info", "warning", "critical")

_CROCKFORD = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"


class EventFormatError(ValueError):
    """Raised for event payloads that do not parse."""


def _encode_base32(value: int, length: int) -> str:
    chars = []
    for _ in range(length):
        chars.append(_CROCKFORD[value & 0x1F])
        value >>= 5
    return "".join(reversed(chars))


class UlidFactory:
    """ULID-style ids: 48-bit ms timestamp + 80-bit entropy, lexically sortable.

    Ids issued by one factory are strictly increasing even within the same
    millisecond (the entropy field is bumped). Seeding the factory makes a
    pipeline's output reproducible.
    """

    def __init__(self, seed=None):
        self._rng = random.Random(seed)
        self._last_ts = -1
        self._last_entropy = 0

    def new(self, ts_ms: int) -> str:
        if ts_ms < 0:
            raise ValueError("timestamp must be non-negative")
        if ts_ms <= self._last_ts:
            ts_ms = self._last_ts
            entropy = self._last_entropy + 1
        else:
            entropy = self._rng.getrandbits(80)
        self._last_ts = ts_ms
        self._last_entropy = entropy
        return _encode_base32(ts_ms, 10) + _encode_base32(entropy, 16)


def severity_for(kind: str, role: str | None = None, severity_map: dict | None = None) -> str:
    """Default severity for an event kind; host-down on a controller is critical."""
    severity_map = severity_map or DEFAULT_CONFIG["severity_map"]
    if kind == "host-down" and role == "controller":
        return "critical"
    return severity_map.get(kind, "warning")


@dataclass(frozen=True, slots=True)
class SensorEvent:
    event_id: str
    aor_id: str
    sensor_id: str
    kind: str
    ts: int  # UTC ms
    severity: str
    detail: dict = field(default_factory=dict)
    evidence_ref: tuple[int, int] = (0, 0)  # record-index range, inclusive

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id,
            "aor_id": self.aor_id,
            "sensor_id": self.sensor_id,
            "kind": self.kind,
            "ts": self.ts,
            "severity": self.severity,
            "detail": self.detail,
            "evidence_ref": list(self.evidence_ref),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_dict(cls, raw: dict) -> "SensorEvent":
        try:
            return cls(
                event_id=raw["event_id"],
                aor_id=raw["aor_id"],
                sensor_id=raw["sensor_id"],
                kind=raw["kind"],
                ts=int(raw["ts"]),
                severity=raw["severity"],
                detail=dict(raw.get("detail", {})),
                evidence_ref=tuple(raw.get("evidence_ref", (0, 0))),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise EventFormatError(f"bad sensor event payload: {exc!r}") from exc

    @classmethod
    def from_json(cls, line: str) -> "SensorEvent":
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise EventFormatError(f"unparseable event line: {exc}") from exc
        return cls.from_dict(raw)
