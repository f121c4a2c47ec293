"""Daily situation reports.

One SITREP per AoR per day, emitted even when nothing happened: an empty
report is itself information. Generation is a pure read over the stores, so
generating the same (AoR, day) twice yields identical documents.
"""

from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

DAY_MS = 86_400_000


class FutureDayError(ValueError):
    """SITREP requested for a day that has not fully elapsed."""


def day_bounds(day: str) -> tuple[int, int]:
    """UTC [start, end) milliseconds for an ISO date string."""
    try:
        start = datetime.strptime(day, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    except ValueError as exc:
        raise ValueError(f"day must be YYYY-MM-DD, got {day!r}") from exc
    start_ms = int(start.timestamp() * 1000)
    return start_ms, start_ms + DAY_MS


def day_of(ts_ms: int) -> str:
    return datetime.fromtimestamp(ts_ms / 1000, tz=timezone.utc).strftime("%Y-%m-%d")


def elapsed_days(start_ms: int, now_ms: int) -> list[str]:
    """ISO dates of every UTC day fully elapsed between start and now."""
    days = []
    cursor = datetime.fromtimestamp(start_ms / 1000, tz=timezone.utc)
    cursor = cursor.replace(hour=0, minute=0, second=0, microsecond=0)
    while True:
        day_end = cursor + timedelta(days=1)
        if int(day_end.timestamp() * 1000) > now_ms:
            break
        days.append(cursor.strftime("%Y-%m-%d"))
        cursor = day_end
    return days


@dataclass(frozen=True)
class Sitrep:
    aor_id: str
    report_date: str
    total_events: int
    counts_by_kind: dict
    counts_by_severity: dict
    ticket_refs_opened: tuple[str, ...]
    ticket_refs_advanced: tuple[str, ...]
    compliance_summaries: tuple
    narrative: str
    submitted_by: str
    submitted_at: int  # UTC ms; the day boundary, so regeneration is identical

    def to_dict(self) -> dict:
        return {
            "aor_id": self.aor_id,
            "report_date": self.report_date,
            "total_events": self.total_events,
            "counts_by_kind": dict(self.counts_by_kind),
            "counts_by_severity": dict(self.counts_by_severity),
            "ticket_refs_opened": list(self.ticket_refs_opened),
            "ticket_refs_advanced": list(self.ticket_refs_advanced),
            "compliance_summaries": [dict(c) for c in self.compliance_summaries],
            "narrative": self.narrative,
            "submitted_by": self.submitted_by,
            "submitted_at": self.submitted_at,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Sitrep":
        return cls(
            aor_id=raw["aor_id"],
            report_date=raw["report_date"],
            total_events=int(raw["total_events"]),
            counts_by_kind=dict(raw.get("counts_by_kind", {})),
            counts_by_severity=dict(raw.get("counts_by_severity", {})),
            ticket_refs_opened=tuple(raw.get("ticket_refs_opened", ())),
            ticket_refs_advanced=tuple(raw.get("ticket_refs_advanced", ())),
            compliance_summaries=tuple(raw.get("compliance_summaries", ())),
            narrative=raw.get("narrative", ""),
            submitted_by=raw.get("submitted_by", ""),
            submitted_at=int(raw.get("submitted_at", 0)),
        )


def _narrative(total: int, counts_by_kind: dict, counts_by_severity: dict) -> str:
    if total == 0:
        return "No reportable events this day. Monitoring coverage nominal."
    kinds = ", ".join(f"{n} {kind}" for kind, n in sorted(counts_by_kind.items()))
    criticals = counts_by_severity.get("critical", 0)
    head = f"{total} events recorded ({kinds})."
    if criticals:
        head += f" {criticals} critical events require command attention."
    return head


def generate_sitrep(
    aor_id: str,
    day: str,
    events,
    tickets=(),
    compliance_summaries=(),
    now_ms: int | None = None,
    submitted_by: str = "joc-auto",
) -> Sitrep:
    """Roll up one AoR-day. The day must have fully elapsed on the platform clock."""
    start_ms, end_ms = day_bounds(day)
    if now_ms is not None and end_ms > now_ms:
        raise FutureDayError(
            f"day {day} ends at {end_ms} but the platform clock reads {now_ms}"
        )

    counts_by_kind: dict[str, int] = {}
    counts_by_severity: dict[str, int] = {}
    total = 0
    for event in events:
        if event.aor_id != aor_id or not start_ms <= event.ts < end_ms:
            continue
        total += 1
        counts_by_kind[event.kind] = counts_by_kind.get(event.kind, 0) + 1
        counts_by_severity[event.severity] = counts_by_severity.get(event.severity, 0) + 1

    opened = []
    advanced = []
    for ticket in tickets:
        if ticket.aor_id != aor_id or not ticket.history:
            continue
        first_ts = ticket.history[0][2]
        if start_ms <= first_ts < end_ms:
            opened.append(ticket.ticket_id)
        if any(start_ms <= ts < end_ms for _, _, ts, _ in ticket.history[1:]):
            advanced.append(ticket.ticket_id)

    return Sitrep(
        aor_id=aor_id,
        report_date=day,
        total_events=total,
        counts_by_kind=counts_by_kind,
        counts_by_severity=counts_by_severity,
        ticket_refs_opened=tuple(sorted(opened)),
        ticket_refs_advanced=tuple(sorted(advanced)),
        compliance_summaries=tuple(compliance_summaries),
        narrative=_narrative(total, counts_by_kind, counts_by_severity),
        submitted_by=submitted_by,
        submitted_at=end_ms,
    )
