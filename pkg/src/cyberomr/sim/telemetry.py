"""Telemetry record types and their line-delimited wire format.

Archives are UTF-8 text, one schema-tagged JSON record per line, so they can
be replayed through the sensor pipeline without the simulator present.
Ground-truth annotations use the same format in a sidecar file.
"""

import json
from dataclasses import dataclass


class RecordFormatError(ValueError):
    """Raised for lines that do not parse as a known record schema."""


@dataclass(frozen=True, slots=True)
class FlowRecord:
    ts_start: int  # UTC ms
    ts_end: int
    src: str
    dst: str
    protocol: str
    bytes: int
    packets: int

    def to_dict(self) -> dict:
        return {
            "t": "flow",
            "ts_start": self.ts_start,
            "ts_end": self.ts_end,
            "src": self.src,
            "dst": self.dst,
            "protocol": self.protocol,
            "bytes": self.bytes,
            "packets": self.packets,
        }

    @property
    def ts(self) -> int:
        return self.ts_start


@dataclass(frozen=True, slots=True)
class DeviceLog:
    ts: int
    host_id: str
    level: str
    code: str

    def to_dict(self) -> dict:
        return {
            "t": "log",
            "ts": self.ts,
            "host_id": self.host_id,
            "level": self.level,
            "code": self.code,
        }


@dataclass(frozen=True, slots=True)
class ControlMessage:
    ts: int
    src: str
    dst: str
    function_code: int
    payload_size: int

    def to_dict(self) -> dict:
        return {
            "t": "ctl",
            "ts": self.ts,
            "src": self.src,
            "dst": self.dst,
            "function_code": self.function_code,
            "payload_size": self.payload_size,
        }


@dataclass(frozen=True, slots=True)
class Annotation:
    """Ground-truth marker for one scheduled attack."""

    kind: str
    target: str
    start_ms: int
    end_ms: int
    detail: dict

    def to_dict(self) -> dict:
        return {
            "t": "attack",
            "kind": self.kind,
            "target": self.target,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "detail": self.detail,
        }

    def covers(self, ts: int) -> bool:
        return self.start_ms <= ts < self.end_ms


TelemetryRecord = FlowRecord | DeviceLog | ControlMessage


def record_to_line(record) -> str:
    return json.dumps(record.to_dict(), separators=(",", ":"), sort_keys=True)


def record_from_dict(raw: dict):
    tag = raw.get("t")
    if tag == "flow":
        rec = FlowRecord(
            ts_start=raw["ts_start"],
            ts_end=raw["ts_end"],
            src=raw["src"],
            dst=raw["dst"],
            protocol=raw["protocol"],
            bytes=raw["bytes"],
            packets=raw["packets"],
        )
        if rec.ts_end < rec.ts_start:
            raise RecordFormatError(f"flow ts_end {rec.ts_end} < ts_start {rec.ts_start}")
        if not rec.bytes >= rec.packets >= 0:
            raise RecordFormatError(f"flow requires bytes >= packets >= 0, got {rec.bytes}/{rec.packets}")
        return rec
    if tag == "log":
        return DeviceLog(ts=raw["ts"], host_id=raw["host_id"], level=raw["level"], code=raw["code"])
    if tag == "ctl":
        return ControlMessage(
            ts=raw["ts"],
            src=raw["src"],
            dst=raw["dst"],
            function_code=raw["function_code"],
            payload_size=raw["payload_size"],
        )
    if tag == "attack":
        return Annotation(
            kind=raw["kind"],
            target=raw["target"],
            start_ms=raw["start_ms"],
            end_ms=raw["end_ms"],
            detail=raw.get("detail", {}),
        )
    raise RecordFormatError(f"unknown record tag {tag!r}")


def record_from_line(line: str):
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordFormatError(f"unparseable record line: {exc}") from exc
    if not isinstance(raw, dict):
        raise RecordFormatError("record line must be a JSON object")
    return record_from_dict(raw)


def hosts_of(record) -> tuple[str, ...]:
    """Host ids mentioned by a record, in src-then-dst order."""
    if isinstance(record, FlowRecord):
        return (record.src, record.dst)
    if isinstance(record, ControlMessage):
        return (record.src, record.dst)
    return (record.host_id,)
