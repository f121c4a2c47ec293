"""Report export: lossless structured data and fixed-order plain text.

Structured-data is a JSON envelope ``{"report_type": ..., "report": ...}``
that round-trips exactly through :func:`parse_report`. Plain text renders the
mandatory fields in a fixed order so exports diff cleanly between revisions.
"""

import json
from datetime import datetime, timezone

from ..joc.correlate import CorrelationGroup
from .sitrep import Sitrep
from .tickets import Ticket

FORMATS = ("structured-data", "plain-text")


class ExportError(ValueError):
    pass


def _utc(ts_ms: int) -> str:
    return datetime.fromtimestamp(ts_ms / 1000, tz=timezone.utc).strftime(
        "%Y-%m-%dT%H:%M:%S.%f"
    )[:-3] + "Z"


def _report_type(report) -> str:
    if isinstance(report, Ticket):
        return "ticket"
    if isinstance(report, Sitrep):
        return "sitrep"
    if isinstance(report, CorrelationGroup):
        return "correlation-group"
    raise ExportError(f"cannot export {type(report).__name__}")


def export_report(report, format: str = "structured-data") -> bytes:
    """Serialize a persisted report. Draft tickets are not exportable."""
    if format not in FORMATS:
        raise ExportError(f"unknown format {format!r}; choose one of {FORMATS}")
    report_type = _report_type(report)
    if isinstance(report, Ticket) and report.state == "draft":
        raise ExportError(
            f"ticket {report.ticket_id} is an unpersisted draft; submit it before export"
        )
    if format == "structured-data":
        envelope = {"report_type": report_type, "report": report.to_dict()}
        return json.dumps(envelope, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return _plain_text(report, report_type).encode("utf-8")


def parse_report(blob: bytes):
    """Inverse of structured-data export."""
    try:
        envelope = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ExportError(f"not a structured-data report: {exc}") from exc
    report_type = envelope.get("report_type")
    raw = envelope.get("report", {})
    if report_type == "ticket":
        return Ticket.from_dict(raw)
    if report_type == "sitrep":
        return Sitrep.from_dict(raw)
    if report_type == "correlation-group":
        return CorrelationGroup.from_dict(raw)
    raise ExportError(f"unknown report_type {report_type!r}")


def _plain_text(report, report_type: str) -> str:
    if report_type == "ticket":
        lines = [
            "SPECIAL INCIDENT REPORT (SINCREP)",
            f"TICKET: {report.ticket_id}",
            f"STATE: {report.state}",
            f"START TIME OF EVENT: {_utc(report.start_time_of_event)}",
            f"EVENT TYPE: {report.event_type}",
            f"AOR: {report.aor_id}",
            f"DETECTING SENSOR: {report.detecting_sensor}",
            "SUPPORTING EVIDENCE:",
        ]
        for item in report.supporting_evidence:
            lines.append(f"  - {json.dumps(item, sort_keys=True)}")
        lines.append("HISTORY:")
        for state, actor, ts, note in report.history:
            lines.append(f"  - {_utc(ts)} {state} by {actor}: {note}")
        return "\n".join(lines) + "\n"

    if report_type == "sitrep":
        lines = [
            "DAILY SITUATION REPORT (SITREP)",
            f"AOR: {report.aor_id}",
            f"DATE: {report.report_date}",
            f"EVENTS: {report.total_events}",
            "EVENTS BY KIND:",
        ]
        for kind, n in sorted(report.counts_by_kind.items()):
            lines.append(f"  - {kind}: {n}")
        lines.append("EVENTS BY SEVERITY:")
        for severity, n in sorted(report.counts_by_severity.items()):
            lines.append(f"  - {severity}: {n}")
        lines.append(f"TICKETS OPENED: {', '.join(report.ticket_refs_opened) or '(none)'}")
        lines.append(f"TICKETS ADVANCED: {', '.join(report.ticket_refs_advanced) or '(none)'}")
        lines.append("COMPLIANCE:")
        if report.compliance_summaries:
            for summary in report.compliance_summaries:
                lines.append(f"  - {json.dumps(dict(summary), sort_keys=True)}")
        else:
            lines.append("  - (no observations)")
        lines.append(f"NARRATIVE: {report.narrative}")
        lines.append(f"SUBMITTED BY: {report.submitted_by}")
        lines.append(f"SUBMITTED AT: {_utc(report.submitted_at)}")
        return "\n".join(lines) + "\n"

    lines = [
        "CORRELATION GROUP",
        f"GROUP: {report.group_id}",
        f"REGION: {report.region_tag}",
        f"WINDOW: {_utc(report.window_start)} .. {_utc(report.window_end)}",
        "MEMBER REPORTS:",
    ]
    for unit_type, report_id in report.member_reports:
        lines.append(f"  - [{unit_type}] {report_id}")
    lines.append(f"SUMMARY: {report.summary}")
    return "\n".join(lines) + "\n"
