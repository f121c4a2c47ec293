"""Special incident report (SINCREP) tickets and their lifecycle.

A ticket is a human artifact: two tickets raised from the same sensor event
are two tickets. The lifecycle is a data-driven state table (config key
``ticket_lifecycle``) so a different reading of the triage flow is a config
change. History is append-only and replaying it from draft must always
reproduce the current state.
"""

import itertools
import threading
from dataclasses import dataclass, field

from ..config import DEFAULT_CONFIG
from ..sensor.events import SensorEvent

TICKET_STATES = (
    "draft",
    "submitted",
    "acknowledged",
    "in-analysis",
    "escalated",
    "resolved",
    "closed",
)

# The five mandatory custom fields; a ticket cannot be submitted without them.
MANDATORY_FIELDS = (
    "start_time_of_event",
    "event_type",
    "supporting_evidence",
    "aor_id",
    "detecting_sensor",
)


class TicketValidationError(ValueError):
    """Missing or malformed mandatory fields, itemized."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid ticket: " + "; ".join(self.problems))


class TransitionError(ValueError):
    """Illegal lifecycle action; names the current state and what is legal."""

    def __init__(self, state: str, action: str, legal: list[str]):
        self.state = state
        self.action = action
        self.legal = list(legal)
        super().__init__(
            f"action {action!r} is illegal from state {state!r}; "
            f"legal actions: {', '.join(legal) if legal else '(none)'}"
        )


def lifecycle_table(config: dict | None = None) -> dict[tuple[str, str], str]:
    raw = (config or DEFAULT_CONFIG)["ticket_lifecycle"]
    table = {}
    for key, target in raw.items():
        state, action = key.split(":", 1)
        table[(state, action)] = target
    return table


def lifecycle_actions(table: dict[tuple[str, str], str]) -> list[str]:
    return sorted({action for _, action in table})


def legal_actions(state: str, table: dict[tuple[str, str], str]) -> list[str]:
    return sorted(action for (s, action) in table if s == state)


def next_state(state: str, action: str, table: dict[tuple[str, str], str] | None = None) -> str | None:
    """Pure transition function; None when the action is illegal."""
    table = table if table is not None else lifecycle_table()
    return table.get((state, action))


@dataclass
class Ticket:
    ticket_id: str
    start_time_of_event: int  # UTC ms
    event_type: str
    supporting_evidence: list
    aor_id: str
    detecting_sensor: str
    state: str = "draft"
    source_event_id: str | None = None
    created_ms: int = 0
    history: list[tuple[str, str, int, str]] = field(default_factory=list)  # (state, actor, ts, note)

    def to_dict(self) -> dict:
        return {
            "ticket_id": self.ticket_id,
            "start_time_of_event": self.start_time_of_event,
            "event_type": self.event_type,
            "supporting_evidence": list(self.supporting_evidence),
            "aor_id": self.aor_id,
            "detecting_sensor": self.detecting_sensor,
            "state": self.state,
            "source_event_id": self.source_event_id,
            "created_ms": self.created_ms,
            "history": [list(entry) for entry in self.history],
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Ticket":
        return cls(
            ticket_id=raw["ticket_id"],
            start_time_of_event=int(raw["start_time_of_event"]),
            event_type=raw["event_type"],
            supporting_evidence=list(raw.get("supporting_evidence", [])),
            aor_id=raw["aor_id"],
            detecting_sensor=raw["detecting_sensor"],
            state=raw.get("state", "draft"),
            source_event_id=raw.get("source_event_id"),
            created_ms=int(raw.get("created_ms", 0)),
            history=[tuple(entry) for entry in raw.get("history", [])],
        )

    def replay_state(self) -> str:
        """State reached by replaying history from draft."""
        state = "draft"
        for entry_state, _, _, _ in self.history:
            state = entry_state
        return state


def validate_draft(fields: dict) -> list[str]:
    problems = []
    for name in MANDATORY_FIELDS:
        value = fields.get(name)
        if value is None or value == "" or value == []:
            problems.append(f"mandatory field {name!r} is missing")
    return problems


class TicketStore:
    """Tickets keyed by id; transitions serialized per store."""

    def __init__(self, config: dict | None = None, clock=None):
        self.config = config or DEFAULT_CONFIG
        self.table = lifecycle_table(self.config)
        self.clock = clock
        self._tickets: dict[str, Ticket] = {}
        self._counter = itertools.count(1)
        self._lock = threading.RLock()

    def _now(self) -> int:
        return self.clock.now_ms() if self.clock else 0

    def create_sincrep(
        self,
        fields: dict,
        source_event: SensorEvent | None = None,
        actor: str = "",
        note: str = "",
    ) -> Ticket:
        """Validate the draft and persist it, immediately submitted.

        With a source event the evidence reference, start time, type, AoR and
        sensor are auto-populated from the detection, so the analyst only adds
        what the machine cannot know.
        """
        fields = dict(fields)
        if source_event is not None:
            fields.setdefault("start_time_of_event", source_event.ts)
            fields.setdefault("event_type", source_event.kind)
            fields.setdefault("aor_id", source_event.aor_id)
            fields.setdefault("detecting_sensor", source_event.sensor_id)
            evidence = fields.get("supporting_evidence") or []
            evidence = list(evidence)
            evidence.append(
                {
                    "event_id": source_event.event_id,
                    "evidence_ref": list(source_event.evidence_ref),
                }
            )
            fields["supporting_evidence"] = evidence

        problems = validate_draft(fields)
        if problems:
            raise TicketValidationError(problems)

        with self._lock:
            now = self._now()
            ticket = Ticket(
                ticket_id=f"T-{next(self._counter):06d}",
                start_time_of_event=int(fields["start_time_of_event"]),
                event_type=str(fields["event_type"]),
                supporting_evidence=list(fields["supporting_evidence"]),
                aor_id=str(fields["aor_id"]),
                detecting_sensor=str(fields["detecting_sensor"]),
                state="submitted",
                source_event_id=source_event.event_id if source_event else None,
                created_ms=now,
                history=[("submitted", actor or "reporter", now, note or "created")],
            )
            self._tickets[ticket.ticket_id] = ticket
            return ticket

    def transition(self, ticket_id: str, action: str, actor: str, note: str = "") -> Ticket:
        with self._lock:
            ticket = self.get(ticket_id)
            target = next_state(ticket.state, action, self.table)
            if target is None:
                raise TransitionError(ticket.state, action, legal_actions(ticket.state, self.table))
            ticket.state = target
            ticket.history.append((target, actor, self._now(), note))
            return ticket

    def get(self, ticket_id: str) -> Ticket:
        ticket = self._tickets.get(ticket_id)
        if ticket is None:
            raise KeyError(f"unknown ticket {ticket_id!r}")
        return ticket

    def all(self) -> list[Ticket]:
        return list(self._tickets.values())

    def __len__(self) -> int:
        return len(self._tickets)
