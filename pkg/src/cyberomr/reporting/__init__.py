"""SINCREP tickets, daily SITREPs, exports, and report figures."""

from .attachments import AttachmentStore
from .export import ExportError, export_report, parse_report
from .figures import (
    render_event_summary_figure,
    render_volume_figure,
    write_events_jsonl,
    write_series_csv,
)
from .sitrep import (
    FutureDayError,
    Sitrep,
    day_bounds,
    day_of,
    elapsed_days,
    generate_sitrep,
)
from .tickets import (
    MANDATORY_FIELDS,
    TICKET_STATES,
    Ticket,
    TicketStore,
    TicketValidationError,
    TransitionError,
    legal_actions,
    lifecycle_actions,
    lifecycle_table,
    next_state,
    validate_draft,
)

__all__ = [
    "AttachmentStore",
    "ExportError",
    "FutureDayError",
    "MANDATORY_FIELDS",
    "Sitrep",
    "TICKET_STATES",
    "Ticket",
    "TicketStore",
    "TicketValidationError",
    "TransitionError",
    "day_bounds",
    "day_of",
    "elapsed_days",
    "export_report",
    "generate_sitrep",
    "legal_actions",
    "lifecycle_actions",
    "lifecycle_table",
    "next_state",
    "parse_report",
    "render_event_summary_figure",
    "render_volume_figure",
    "validate_draft",
    "write_events_jsonl",
    "write_series_csv",
]
