"""JOC engine: ingestion, monitoring-mode dispatch, and batch review.

Dispatch policy: real-time AoRs alert every event immediately; batch AoRs
queue events into the currently open review window. Critical events in batch
AoRs are additionally alerted at once, because a monitoring unit that sits on
a critical control-plane event for 24 hours is not observing, it is ignoring.

Batch review is dual-control: a batch reaches signed-off only with signatures
from two distinct analysts. Windows tile time contiguously per AoR from the
moment the AoR is registered.
"""

import itertools
import queue
import threading
import time
from dataclasses import dataclass, field

from ..config import DEFAULT_CONFIG
from ..sensor.events import SensorEvent
from ..sensor.uplink import FrameAuthError, parse_frame
from .correlate import CorrelationGroup, UnitReport, correlate_reports
from .store import EventStore


class RoutingError(KeyError):
    """Event names an AoR the engine does not know."""


class BatchStateError(RuntimeError):
    """Batch lifecycle operation out of order."""


class DualControlError(ValueError):
    """Sign-off would violate the two-distinct-analysts rule."""


class ManualClock:
    """Deterministic clock driven by the caller; never moves backwards."""

    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def advance(self, ms: int) -> int:
        self._now += ms
        return self._now

    def set(self, now_ms: int) -> int:
        self._now = max(self._now, now_ms)
        return self._now


class WallClock:
    def now_ms(self) -> int:
        return int(time.time() * 1000)


@dataclass(frozen=True)
class MonitoringMode:
    kind: str                     # "real-time" | "batch"
    interval_hours: float = 24.0
    review_hours: float = 2.0

    REAL_TIME = "real-time"
    BATCH = "batch"

    def __post_init__(self):
        if self.kind not in (self.REAL_TIME, self.BATCH):
            raise ValueError(f"unknown monitoring mode {self.kind!r}")
        if self.kind == self.BATCH and self.interval_hours <= 0:
            raise ValueError("batch interval must be > 0 hours")

    @property
    def is_real_time(self) -> bool:
        return self.kind == self.REAL_TIME

    @property
    def interval_ms(self) -> int:
        return int(self.interval_hours * 3_600_000)

    def to_dict(self) -> dict:
        if self.is_real_time:
            return {"kind": self.kind}
        return {
            "kind": self.kind,
            "interval_hours": self.interval_hours,
            "review_hours": self.review_hours,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "MonitoringMode":
        if raw.get("kind") == cls.REAL_TIME:
            return cls(kind=cls.REAL_TIME)
        return cls(
            kind=cls.BATCH,
            interval_hours=float(raw.get("interval_hours", 24.0)),
            review_hours=float(raw.get("review_hours", 2.0)),
        )

    @classmethod
    def real_time(cls) -> "MonitoringMode":
        return cls(kind=cls.REAL_TIME)

    @classmethod
    def batch(cls, interval_hours: float = 24.0, review_hours: float = 2.0) -> "MonitoringMode":
        return cls(kind=cls.BATCH, interval_hours=interval_hours, review_hours=review_hours)


@dataclass(frozen=True)
class AoR:
    aor_id: str
    site_id: str
    label: str = ""
    mode: MonitoringMode = field(default_factory=MonitoringMode.batch)
    region_tag: str = ""
    assigned_analysts: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "aor_id": self.aor_id,
            "site_id": self.site_id,
            "label": self.label,
            "mode": self.mode.to_dict(),
            "region_tag": self.region_tag,
            "assigned_analysts": list(self.assigned_analysts),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "AoR":
        return cls(
            aor_id=raw["aor_id"],
            site_id=raw.get("site_id", ""),
            label=raw.get("label", ""),
            mode=MonitoringMode.from_dict(raw.get("mode", {"kind": "batch"})),
            region_tag=raw.get("region_tag", ""),
            assigned_analysts=tuple(raw.get("assigned_analysts", ())),
        )


@dataclass
class ReviewBatch:
    batch_id: str
    aor_id: str
    window_start: int  # UTC ms
    window_end: int
    event_ids: list[str] = field(default_factory=list)
    state: str = "open"  # open | under-review | signed-off
    signatures: list[tuple[str, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "batch_id": self.batch_id,
            "aor_id": self.aor_id,
            "window_start": self.window_start,
            "window_end": self.window_end,
            "event_ids": list(self.event_ids),
            "state": self.state,
            "signatures": [list(s) for s in self.signatures],
        }


@dataclass(frozen=True)
class Disposition:
    alerted: bool
    batch_id: str | None = None
    dead_letter: bool = False

    @property
    def kind(self) -> str:
        if self.dead_letter:
            return "dead-letter"
        if self.alerted and self.batch_id:
            return "alert+queued"
        if self.alerted:
            return "alert"
        return "queued"


@dataclass(frozen=True)
class AlertRecord:
    event_id: str
    arrived_ms: int
    visible_ms: int
    arrived_cycle: int
    visible_cycle: int


class JocEngine:
    """Single-coordinator engine; ingestion may arrive from many connections.

    Persisted state transitions are serialized under one lock; subscriber
    queues make alert fan-out safe to consume from other threads.
    """

    def __init__(self, config: dict | None = None, clock=None, store: EventStore | None = None):
        self.config = config or DEFAULT_CONFIG
        self.clock = clock or WallClock()
        # explicit None check: an empty EventStore is falsy (len() == 0)
        self.store = store if store is not None else EventStore()
        self.aors: dict[str, AoR] = {}
        self.batches: dict[str, ReviewBatch] = {}
        self._open_batch: dict[str, str] = {}            # aor_id -> batch_id
        self._batch_counter = itertools.count(1)
        self._last_sequence: dict[str, int] = {}         # connection -> last seq
        self._subscribers: list[queue.Queue] = []
        self.alert_log: list[AlertRecord] = []
        self.unit_reports: list[UnitReport] = []
        self._cycle = 0
        self._lock = threading.RLock()

    # -- dispatch cycle instrumentation -----------------------------------

    @property
    def cycle(self) -> int:
        return self._cycle

    def tick_cycle(self) -> int:
        with self._lock:
            self._cycle += 1
            return self._cycle

    # -- AoR registry ------------------------------------------------------

    def register_aor(self, aor: AoR) -> AoR:
        # batch windows open lazily at first dispatch (or first query), so a
        # replayed archive anchors them to data time, not registration time
        with self._lock:
            self.aors[aor.aor_id] = aor
            return aor

    def get_aor(self, aor_id: str) -> AoR:
        aor = self.aors.get(aor_id)
        if aor is None:
            raise RoutingError(f"unknown AoR {aor_id!r}")
        return aor

    # -- ingestion ---------------------------------------------------------

    def receive_frame(self, frame_bytes: bytes, key: bytes, connection: str = "uplink") -> list[SensorEvent]:
        """Authenticate, persist, and dispatch one uplink frame.

        Returns the events that were newly persisted (replays return []).
        A bad tag records an integrity alert and raises FrameAuthError.
        """
        with self._lock:
            try:
                sequence, events, _ = parse_frame(frame_bytes, key)
            except FrameAuthError as exc:
                self.store.add_integrity_warning(
                    {
                        "kind": "frame-authentication-failure",
                        "connection": connection,
                        "ts": self.clock.now_ms(),
                        "detail": str(exc),
                    }
                )
                raise

            # replayed archives drive a manual clock from the data: advance to
            # the frame's earliest event before dispatch (so the open window
            # contains the events) and to the latest afterwards
            if events and isinstance(self.clock, ManualClock):
                self.clock.set(min(e.ts for e in events))
                self.close_elapsed_batches()

            last = self._last_sequence.get(connection)
            if last is not None and sequence > last + 1:
                missing = list(range(last + 1, sequence))
                self.store.add_integrity_warning(
                    {
                        "kind": "sequence-gap",
                        "connection": connection,
                        "ts": self.clock.now_ms(),
                        "missing": missing,
                        "detail": f"sequence jumped {last}->{sequence}, missing {missing}",
                    }
                )
            if last is None or sequence > last:
                self._last_sequence[connection] = sequence

            persisted = []
            for event in events:
                if self.ingest_event(event) is not None:
                    persisted.append(event)
            if events and isinstance(self.clock, ManualClock):
                self.clock.set(max(e.ts for e in events))
                self.close_elapsed_batches()
            return persisted

    def ingest_event(self, event: SensorEvent) -> Disposition | None:
        """Persist and dispatch one event. Returns None for duplicates."""
        with self._lock:
            if not self.store.add(event):
                return None
            aor = self.aors.get(event.aor_id)
            if aor is None:
                self.store.add_dead_letter(
                    {
                        "event": event.to_dict(),
                        "reason": f"unknown AoR {event.aor_id!r}",
                        "ts": self.clock.now_ms(),
                    }
                )
                return Disposition(alerted=False, dead_letter=True)
            return self.dispatch_event(event, aor)

    def dispatch_event(self, event: SensorEvent, aor: AoR) -> Disposition:
        with self._lock:
            if aor.aor_id not in self.aors:
                raise RoutingError(f"AoR {aor.aor_id!r} is not registered")
            if aor.mode.is_real_time:
                self._publish_alert(event)
                return Disposition(alerted=True)
            batch = self._current_batch(aor)
            batch.event_ids.append(event.event_id)
            alerted = event.severity == "critical"
            if alerted:
                self._publish_alert(event)
            return Disposition(alerted=alerted, batch_id=batch.batch_id)

    # -- alert bus ----------------------------------------------------------

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def _publish_alert(self, event: SensorEvent) -> None:
        now = self.clock.now_ms()
        record = AlertRecord(
            event_id=event.event_id,
            arrived_ms=now,
            visible_ms=now,
            arrived_cycle=self._cycle,
            visible_cycle=self._cycle,
        )
        self.alert_log.append(record)
        # subscribers receive (global alert sequence, event); the sequence lets
        # stream clients detect missed alerts across reconnects
        sequence = len(self.alert_log)
        for q in self._subscribers:
            q.put((sequence, event))

    # -- batch lifecycle -----------------------------------------------------

    def _open_new_batch(self, aor: AoR, window_start: int) -> ReviewBatch:
        batch = ReviewBatch(
            batch_id=f"batch-{aor.aor_id}-{next(self._batch_counter):06d}",
            aor_id=aor.aor_id,
            window_start=window_start,
            window_end=window_start + aor.mode.interval_ms,
        )
        self.batches[batch.batch_id] = batch
        self._open_batch[aor.aor_id] = batch.batch_id
        return batch

    def _current_batch(self, aor: AoR) -> ReviewBatch:
        batch_id = self._open_batch.get(aor.aor_id)
        if batch_id is None:
            return self._open_new_batch(aor, self.clock.now_ms())
        return self.batches[batch_id]

    def open_batch(self, aor_id: str) -> ReviewBatch:
        return self._current_batch(self.get_aor(aor_id))

    def close_batch_window(self, aor_id: str, now: int | None = None) -> ReviewBatch:
        """Close the elapsed open batch and open its contiguous successor."""
        with self._lock:
            aor = self.get_aor(aor_id)
            now = self.clock.now_ms() if now is None else now
            batch = self._current_batch(aor)
            if batch.window_end > now:
                raise BatchStateError(
                    f"batch {batch.batch_id} window ends at {batch.window_end}, "
                    f"cannot close at {now}"
                )
            batch.state = "under-review"
            self._open_new_batch(aor, batch.window_end)
            return batch

    def close_elapsed_batches(self, now: int | None = None) -> list[ReviewBatch]:
        """Close every batch whose window has fully elapsed, for all AoRs."""
        now = self.clock.now_ms() if now is None else now
        closed = []
        with self._lock:
            for aor_id, aor in self.aors.items():
                if aor.mode.is_real_time or aor_id not in self._open_batch:
                    continue
                while self.batches[self._open_batch[aor_id]].window_end <= now:
                    closed.append(self.close_batch_window(aor_id, now))
        return closed

    def sign_off(self, batch_id: str, analyst_id: str) -> ReviewBatch:
        with self._lock:
            batch = self.batches.get(batch_id)
            if batch is None:
                raise BatchStateError(f"unknown batch {batch_id!r}")
            if batch.state == "open":
                raise BatchStateError(
                    f"batch {batch_id} is still open; close the window before sign-off"
                )
            if batch.state == "signed-off":
                raise BatchStateError(f"batch {batch_id} is already signed off")
            if any(analyst == analyst_id for analyst, _ in batch.signatures):
                raise DualControlError(
                    f"analyst {analyst_id!r} has already signed batch {batch_id}; "
                    "batch review requires two distinct analysts"
                )
            batch.signatures.append((analyst_id, self.clock.now_ms()))
            if len({a for a, _ in batch.signatures}) >= 2:
                batch.state = "signed-off"
            return batch

    def batches_for(self, aor_id: str) -> list[ReviewBatch]:
        return [b for b in self.batches.values() if b.aor_id == aor_id]

    # -- correlation ----------------------------------------------------------

    def add_unit_report(self, report: UnitReport) -> UnitReport:
        with self._lock:
            self.unit_reports.append(report)
            return report

    def correlate(self, window: float | None = None) -> list[CorrelationGroup]:
        if window is None:
            window = self.config["joc"]["correlation_window"]
        with self._lock:
            reports = list(self.unit_reports)
        return correlate_reports(reports, window)
