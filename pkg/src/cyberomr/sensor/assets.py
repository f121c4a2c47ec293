"""Passive asset discovery.

The table is populated exclusively from observed records; this module never
emits traffic of any kind. One new-asset event per host id per table lifetime.
"""

from dataclasses import dataclass, field

from ..sim.telemetry import FlowRecord, hosts_of
from .events import SensorEvent, UlidFactory, severity_for


@dataclass
class AssetEntry:
    first_seen: int
    last_seen: int
    peers: set[str] = field(default_factory=set)
    protocol_tags: set[str] = field(default_factory=set)

    @property
    def observed_peer_count(self) -> int:
        return len(self.peers)

    def to_dict(self) -> dict:
        return {
            "first_seen": self.first_seen,
            "last_seen": self.last_seen,
            "observed_peer_count": self.observed_peer_count,
            "observed_protocol_tags": sorted(self.protocol_tags),
        }


@dataclass
class AssetTable:
    entries: dict[str, AssetEntry] = field(default_factory=dict)

    def __contains__(self, host_id: str) -> bool:
        return host_id in self.entries

    def to_dict(self) -> dict:
        return {host: entry.to_dict() for host, entry in sorted(self.entries.items())}


def track_assets(
    records,
    table: AssetTable | None = None,
    aor_id: str = "",
    sensor_id: str = "",
    severity_map: dict | None = None,
    ids: UlidFactory | None = None,
    record_offset: int = 0,
) -> tuple[AssetTable, list[SensorEvent]]:
    """Fold a record stream into the asset table.

    Returns the (mutated) table and the new-asset events for hosts observed
    for the first time. ``record_offset`` is the archive index of the first
    record in ``records`` so evidence references stay valid on partial streams.
    """
    table = table if table is not None else AssetTable()
    ids = ids or UlidFactory()
    sensor_id = sensor_id or f"sensor-{aor_id}"
    events = []
    for index, record in enumerate(records):
        ts = record.ts
        protocol = record.protocol if isinstance(record, FlowRecord) else None
        mentioned = hosts_of(record)
        for host in mentioned:
            entry = table.entries.get(host)
            if entry is None:
                table.entries[host] = entry = AssetEntry(first_seen=ts, last_seen=ts)
                events.append(
                    SensorEvent(
                        event_id=ids.new(ts),
                        aor_id=aor_id,
                        sensor_id=sensor_id,
                        kind="new-asset",
                        ts=ts,
                        severity=severity_for("new-asset", severity_map=severity_map),
                        detail={"host_id": host},
                        evidence_ref=(record_offset + index, record_offset + index),
                    )
                )
            entry.last_seen = max(entry.last_seen, ts)
            if protocol:
                entry.protocol_tags.add(protocol)
            for peer in mentioned:
                if peer != host:
                    entry.peers.add(peer)
    return table, events
