"""Append-only event store with idempotent ingestion.

Everything the JOC persists is evidence, so nothing is ever mutated or
deleted: events are appended once (duplicates by event_id are silently
ignored), integrity warnings and unroutable events get their own append-only
streams. With a log path configured every append also goes to a JSONL log on
disk, and the store can be rebuilt by replaying that log.
"""

import json
from pathlib import Path

from ..sensor.events import SensorEvent


class EventStore:
    def __init__(self, log_path: str | Path | None = None):
        self._events: list[SensorEvent] = []
        self._by_id: dict[str, SensorEvent] = {}
        self.integrity_warnings: list[dict] = []
        self.dead_letters: list[dict] = []
        self._log_path = Path(log_path) if log_path else None
        if self._log_path and self._log_path.exists():
            self._replay_log()

    # -- persistence -----------------------------------------------------

    def _append_log(self, record: dict) -> None:
        if self._log_path is None:
            return
        self._log_path.parent.mkdir(parents=True, exist_ok=True)
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, separators=(",", ":"), sort_keys=True))
            fh.write("\n")

    def _replay_log(self) -> None:
        with self._log_path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                kind = record.get("record")
                if kind == "event":
                    event = SensorEvent.from_dict(record["event"])
                    if event.event_id not in self._by_id:
                        self._events.append(event)
                        self._by_id[event.event_id] = event
                elif kind == "integrity":
                    self.integrity_warnings.append(record["warning"])
                elif kind == "dead-letter":
                    self.dead_letters.append(record["entry"])

    def write_snapshot(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        snapshot = {
            "events": [e.to_dict() for e in self._events],
            "integrity_warnings": self.integrity_warnings,
            "dead_letters": self.dead_letters,
        }
        path.write_text(json.dumps(snapshot, indent=2, sort_keys=True), encoding="utf-8")

    # -- ingestion -------------------------------------------------------

    def add(self, event: SensorEvent) -> bool:
        """Append an event; returns False when event_id is already present."""
        if event.event_id in self._by_id:
            return False
        self._events.append(event)
        self._by_id[event.event_id] = event
        self._append_log({"record": "event", "event": event.to_dict()})
        return True

    def add_integrity_warning(self, warning: dict) -> None:
        self.integrity_warnings.append(warning)
        self._append_log({"record": "integrity", "warning": warning})

    def add_dead_letter(self, entry: dict) -> None:
        self.dead_letters.append(entry)
        self._append_log({"record": "dead-letter", "entry": entry})

    # -- queries ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._events)

    def __contains__(self, event_id: str) -> bool:
        return event_id in self._by_id

    def get(self, event_id: str) -> SensorEvent | None:
        return self._by_id.get(event_id)

    @property
    def events(self) -> list[SensorEvent]:
        return list(self._events)

    def query(
        self,
        aor_id: str | None = None,
        kind: str | None = None,
        severity: str | None = None,
        since: int | None = None,
        until: int | None = None,
    ) -> list[SensorEvent]:
        out = []
        for event in self._events:
            if aor_id is not None and event.aor_id != aor_id:
                continue
            if kind is not None and event.kind != kind:
                continue
            if severity is not None and event.severity != severity:
                continue
            if since is not None and event.ts < since:
                continue
            if until is not None and event.ts >= until:
                continue
            out.append(event)
        return out
