"""Management API over HTTP with JSON bodies.

The Platform object bundles the engine with the ticket store, compliance
ledger, and SITREP cache; the FastAPI app is a thin layer over it. Every
human-attributed mutation (tickets, sign-offs, compliance observations)
requires an analyst_id; the engine trusts names in this single-tenant build.

The live alert stream is server-sent events: each alert is one ``id:`` /
``event: sensor-event`` / ``data: <json>`` block, so clients can detect gaps
from the id sequence after a reconnect.
"""

import base64
import json
import queue

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.responses import StreamingResponse

from ..config import DEFAULT_CONFIG
from ..governance.assessment import (
    AssessmentValidationError,
    TechnicalAssessment,
    score_assessment,
)
from ..governance.compliance import ComplianceLedger, ObservationError, UnknownTermError
from ..reporting.export import ExportError, export_report
from ..reporting.sitrep import FutureDayError, Sitrep, generate_sitrep
from ..reporting.tickets import TicketStore, TicketValidationError, TransitionError
from ..sensor.events import EventFormatError
from ..sensor.uplink import FrameAuthError
from .correlate import UnitReport
from .engine import (
    AoR,
    BatchStateError,
    DualControlError,
    JocEngine,
    RoutingError,
    WallClock,
)
from .store import EventStore

# Capability manifest: everything the API can do, and the CLI surface that
# reaches it. The CLI parity test walks this list.
CAPABILITIES = [
    {"capability": "register-aor", "method": "POST", "path": "/aors", "cli": "aor register"},
    {"capability": "list-aors", "method": "GET", "path": "/aors", "cli": "aor list"},
    {"capability": "list-events", "method": "GET", "path": "/events", "cli": "events"},
    {"capability": "event-stream", "method": "GET", "path": "/events/stream", "cli": "watch"},
    {"capability": "list-batches", "method": "GET", "path": "/batches", "cli": "batch list"},
    {"capability": "fetch-batch", "method": "GET", "path": "/batches/{batch_id}", "cli": "batch show"},
    {"capability": "close-batch", "method": "POST", "path": "/aors/{aor_id}/close-batch", "cli": "batch close"},
    {"capability": "sign-off-batch", "method": "POST", "path": "/batches/{batch_id}/sign-off", "cli": "batch sign-off"},
    {"capability": "submit-unit-report", "method": "POST", "path": "/unit-reports", "cli": "correlate submit"},
    {"capability": "fetch-correlations", "method": "GET", "path": "/correlations", "cli": "correlate groups"},
    {"capability": "ticket-lifecycle", "method": "GET", "path": "/lifecycle", "cli": "config"},
    {"capability": "create-ticket", "method": "POST", "path": "/tickets", "cli": "ticket create"},
    {"capability": "list-tickets", "method": "GET", "path": "/tickets", "cli": "ticket list"},
    {"capability": "fetch-ticket", "method": "GET", "path": "/tickets/{ticket_id}", "cli": "ticket show"},
    {"capability": "transition-ticket", "method": "POST", "path": "/tickets/{ticket_id}/transition", "cli": "ticket transition"},
    {"capability": "export-ticket", "method": "GET", "path": "/tickets/{ticket_id}/export", "cli": "ticket export"},
    {"capability": "fetch-attachment", "method": "GET", "path": "/attachments/{digest}", "cli": "ticket attachment"},
    {"capability": "fetch-sitrep", "method": "GET", "path": "/sitreps/{aor_id}/{date}", "cli": "sitrep"},
    {"capability": "submit-assessment", "method": "POST", "path": "/assessments", "cli": "assess"},
    {"capability": "record-compliance", "method": "POST", "path": "/compliance", "cli": "comply record"},
    {"capability": "compliance-summary", "method": "GET", "path": "/compliance/summary", "cli": "comply summary"},
    {"capability": "integrity-warnings", "method": "GET", "path": "/integrity", "cli": "events --integrity"},
    {"capability": "dead-letters", "method": "GET", "path": "/dead-letter", "cli": "events --dead-letter"},
]


class Platform:
    """Everything behind the management API, wired together."""

    def __init__(
        self,
        config: dict | None = None,
        clock=None,
        store: EventStore | None = None,
        store_dir: str | None = None,
    ):
        self.config = config or DEFAULT_CONFIG
        self.clock = clock or WallClock()
        self.engine = JocEngine(self.config, clock=self.clock, store=store)
        self.tickets = TicketStore(self.config, clock=self.clock)
        self.compliance = ComplianceLedger(self.config)
        self._sitreps: dict[tuple[str, str], Sitrep] = {}
        from pathlib import Path

        from ..reporting.attachments import AttachmentStore

        root = Path(store_dir) if store_dir else Path(self.config["store"]["root"])
        self.attachments = AttachmentStore(root / self.config["store"]["attachments"])

    def ingest_frame(self, frame_bytes: bytes, key: bytes, connection: str = "uplink"):
        # with a manual clock the engine advances time from the frame's
        # events itself, so replays line batch windows up with data time
        return self.engine.receive_frame(frame_bytes, key, connection)

    def create_ticket(
        self,
        fields: dict,
        source_event_id: str | None,
        actor: str,
        note: str = "",
        attachments=(),
    ):
        source_event = None
        if source_event_id:
            source_event = self.engine.store.get(source_event_id)
            if source_event is None:
                raise KeyError(f"unknown source event {source_event_id!r}")
        if attachments:
            fields = dict(fields)
            evidence = list(fields.get("supporting_evidence") or [])
            for blob, filename in attachments:
                evidence.append(self.attachments.store(blob, filename))
            fields["supporting_evidence"] = evidence
        ticket = self.tickets.create_sincrep(fields, source_event, actor=actor, note=note)
        aor = self.engine.aors.get(ticket.aor_id)
        region = aor.region_tag if aor and aor.region_tag else ticket.aor_id
        self.engine.add_unit_report(
            UnitReport(
                report_id=f"sincrep-{ticket.ticket_id}",
                unit_type="cyber",
                region_tag=region,
                start_ms=ticket.start_time_of_event,
                end_ms=ticket.start_time_of_event,
                summary=f"SINCREP {ticket.ticket_id}: {ticket.event_type}",
            )
        )
        return ticket

    def sitrep(self, aor_id: str, day: str) -> Sitrep:
        cached = self._sitreps.get((aor_id, day))
        if cached is not None:
            return cached
        self.engine.get_aor(aor_id)  # 404 for unknown AoRs
        trends = [
            self.compliance.summary(party, term_id, *_day_range(day))
            for party, term_id in sorted(
                {(o.party, o.term_id) for o in self.compliance.entries}
            )
        ]
        report = generate_sitrep(
            aor_id,
            day,
            self.engine.store.events,
            self.tickets.all(),
            [t.to_dict() for t in trends if sum(t.counts.values())],
            now_ms=self.clock.now_ms(),
        )
        self._sitreps[(aor_id, day)] = report
        return report


def _day_range(day: str) -> tuple[int, int]:
    from ..reporting.sitrep import day_bounds

    return day_bounds(day)


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


def _conflict(exc: Exception) -> HTTPException:
    return HTTPException(status_code=409, detail=str(exc))


def _not_found(exc: Exception) -> HTTPException:
    detail = str(exc.args[0]) if isinstance(exc, KeyError) and exc.args else str(exc)
    return HTTPException(status_code=404, detail=detail)


def _require_analyst(body: dict) -> str:
    analyst = body.get("analyst_id")
    if not analyst or not str(analyst).strip():
        raise HTTPException(status_code=422, detail="mutating requests require analyst_id")
    return str(analyst)


def create_app(platform: Platform | None = None, ui_dir: str | None = None) -> FastAPI:
    platform = platform or Platform()
    app = FastAPI(title="cyber OMR management API", version="0.1.0")
    app.state.platform = platform
    engine = platform.engine

    if ui_dir:
        from pathlib import Path

        from fastapi.staticfiles import StaticFiles

        ui_path = Path(ui_dir)
        if ui_path.is_dir():
            app.mount("/ui", StaticFiles(directory=str(ui_path), html=True), name="ui")

    @app.get("/health")
    def health():
        return {"status": "ok", "clock_ms": platform.clock.now_ms()}

    @app.get("/manifest")
    def manifest():
        return {"capabilities": CAPABILITIES}

    # -- AoRs -----------------------------------------------------------

    @app.post("/aors")
    def register_aor(body: dict = Body(...)):
        try:
            aor = AoR.from_dict(body)
        except (KeyError, ValueError) as exc:
            raise _bad_request(exc)
        return engine.register_aor(aor).to_dict()

    @app.get("/aors")
    def list_aors():
        return {"aors": [a.to_dict() for a in engine.aors.values()]}

    @app.get("/aors/{aor_id}")
    def get_aor(aor_id: str):
        try:
            return engine.get_aor(aor_id).to_dict()
        except RoutingError as exc:
            raise _not_found(exc)

    @app.post("/aors/{aor_id}/close-batch")
    def close_batch(aor_id: str, body: dict = Body(default={})):
        try:
            batch = engine.close_batch_window(aor_id, body.get("now"))
        except RoutingError as exc:
            raise _not_found(exc)
        except BatchStateError as exc:
            raise _conflict(exc)
        return batch.to_dict()

    # -- events -----------------------------------------------------------

    @app.get("/events")
    def list_events(
        aor: str | None = None,
        kind: str | None = None,
        severity: str | None = None,
        since: int | None = None,
        until: int | None = None,
        limit: int = Query(default=1000, ge=1, le=100_000),
    ):
        events = engine.store.query(aor, kind, severity, since, until)
        return {"events": [e.to_dict() for e in events[-limit:]], "total": len(events)}

    @app.get("/events/stream")
    def event_stream(max_events: int | None = None, timeout: float = Query(default=30.0, le=3600)):
        subscription = engine.subscribe()

        def generate():
            sent = 0
            waited = 0.0
            try:
                yield ": connected\n\n"
                while max_events is None or sent < max_events:
                    try:
                        sequence, event = subscription.get(timeout=0.2)
                    except queue.Empty:
                        waited += 0.2
                        if waited >= timeout:
                            return
                        yield ": keepalive\n\n"
                        continue
                    waited = 0.0
                    sent += 1
                    payload = json.dumps(event.to_dict(), sort_keys=True)
                    yield f"id: {sequence}\nevent: sensor-event\ndata: {payload}\n\n"
            finally:
                engine.unsubscribe(subscription)

        return StreamingResponse(generate(), media_type="text/event-stream")

    @app.get("/integrity")
    def integrity():
        return {"warnings": engine.store.integrity_warnings}

    @app.get("/dead-letter")
    def dead_letter():
        return {"entries": engine.store.dead_letters}

    # -- batches ----------------------------------------------------------

    @app.get("/batches")
    def list_batches(aor: str | None = None):
        batches = engine.batches_for(aor) if aor else list(engine.batches.values())
        return {"batches": [b.to_dict() for b in batches]}

    @app.get("/batches/{batch_id}")
    def get_batch(batch_id: str):
        batch = engine.batches.get(batch_id)
        if batch is None:
            raise HTTPException(status_code=404, detail=f"unknown batch {batch_id!r}")
        return batch.to_dict()

    @app.post("/batches/{batch_id}/sign-off")
    def sign_off(batch_id: str, body: dict = Body(...)):
        analyst = _require_analyst(body)
        try:
            batch = engine.sign_off(batch_id, analyst)
        except DualControlError as exc:
            raise _conflict(exc)
        except BatchStateError as exc:
            if "unknown batch" in str(exc):
                raise _not_found(exc)
            raise _conflict(exc)
        return batch.to_dict()

    # -- correlation --------------------------------------------------------

    @app.post("/unit-reports")
    def submit_unit_report(body: dict = Body(...)):
        try:
            report = UnitReport.from_dict(body)
        except (KeyError, ValueError) as exc:
            raise _bad_request(exc)
        return engine.add_unit_report(report).to_dict()

    @app.get("/unit-reports")
    def list_unit_reports():
        return {"reports": [r.to_dict() for r in engine.unit_reports]}

    @app.get("/correlations")
    def correlations(window: float | None = None):
        groups = engine.correlate(window)
        return {"groups": [g.to_dict() for g in groups]}

    # -- tickets -------------------------------------------------------------

    @app.get("/lifecycle")
    def lifecycle():
        """The ticket lifecycle table, so clients never hardcode the DFA."""
        from ..reporting.tickets import TICKET_STATES, lifecycle_table

        table = lifecycle_table(platform.config)
        return {
            "states": list(TICKET_STATES),
            "transitions": [
                {"from": state, "action": action, "to": target}
                for (state, action), target in sorted(table.items())
            ],
        }

    @app.post("/tickets")
    def create_ticket(body: dict = Body(...)):
        analyst = _require_analyst(body)
        try:
            attachments = [
                (base64.b64decode(a["data_base64"]), a.get("filename", ""))
                for a in body.get("attachments", [])
            ]
            ticket = platform.create_ticket(
                body.get("fields", {}),
                body.get("source_event_id"),
                actor=analyst,
                note=body.get("note", ""),
                attachments=attachments,
            )
        except TicketValidationError as exc:
            raise _bad_request(exc)
        except (ValueError, TypeError) as exc:
            raise _bad_request(exc)
        except KeyError as exc:
            raise _not_found(exc)
        return ticket.to_dict()

    @app.get("/attachments/{digest}")
    def fetch_attachment(digest: str):
        try:
            data = platform.attachments.load(digest)
        except KeyError as exc:
            raise _not_found(exc)
        except ValueError as exc:
            raise _conflict(exc)
        return Response(content=data, media_type="application/octet-stream")

    @app.get("/tickets")
    def list_tickets(aor: str | None = None, state: str | None = None):
        tickets = platform.tickets.all()
        if aor:
            tickets = [t for t in tickets if t.aor_id == aor]
        if state:
            tickets = [t for t in tickets if t.state == state]
        return {"tickets": [t.to_dict() for t in tickets]}

    @app.get("/tickets/{ticket_id}")
    def get_ticket(ticket_id: str):
        try:
            return platform.tickets.get(ticket_id).to_dict()
        except KeyError as exc:
            raise _not_found(exc)

    @app.post("/tickets/{ticket_id}/transition")
    def transition_ticket(ticket_id: str, body: dict = Body(...)):
        analyst = _require_analyst(body)
        action = body.get("action")
        if not action:
            raise HTTPException(status_code=422, detail="transition requires an action")
        try:
            ticket = platform.tickets.transition(ticket_id, action, analyst, body.get("note", ""))
        except KeyError as exc:
            raise _not_found(exc)
        except TransitionError as exc:
            raise _conflict(exc)
        return ticket.to_dict()

    @app.get("/tickets/{ticket_id}/export")
    def export_ticket(ticket_id: str, format: str = "structured-data"):
        try:
            ticket = platform.tickets.get(ticket_id)
            blob = export_report(ticket, format)
        except KeyError as exc:
            raise _not_found(exc)
        except ExportError as exc:
            raise _bad_request(exc)
        media = "application/json" if format == "structured-data" else "text/plain"
        return Response(content=blob, media_type=media)

    # -- sitreps ---------------------------------------------------------------

    @app.get("/sitreps/{aor_id}/{date}")
    def fetch_sitrep(aor_id: str, date: str, format: str = "structured-data"):
        try:
            report = platform.sitrep(aor_id, date)
        except RoutingError as exc:
            raise _not_found(exc)
        except FutureDayError as exc:
            raise _bad_request(exc)
        except ValueError as exc:
            raise _bad_request(exc)
        if format == "plain-text":
            return Response(content=export_report(report, "plain-text"), media_type="text/plain")
        return report.to_dict()

    # -- governance ---------------------------------------------------------------

    @app.post("/assessments")
    def submit_assessment(body: dict = Body(...)):
        try:
            assessment = TechnicalAssessment(
                site_id=body.get("site_id", ""),
                peace_contribution=int(body["peace_contribution"]),
                local_support=int(body["local_support"]),
                capacity=int(body["capacity"]),
                civilian_harm_risk=bool(body.get("civilian_harm_risk", False)),
                justification=body.get("justification", ""),
            )
            recommendation = score_assessment(assessment)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, AssessmentValidationError):
                raise _bad_request(exc)
            raise _bad_request(exc)
        return {"assessment": assessment.to_dict(), "recommendation": recommendation.to_dict()}

    @app.post("/compliance")
    def record_compliance(body: dict = Body(...)):
        analyst = _require_analyst(body)
        try:
            obs = platform.compliance.record(
                party=body["party"],
                term_id=body["term_id"],
                ts=int(body.get("ts", platform.clock.now_ms())),
                cooperation_level=body["cooperation_level"],
                note=body.get("note", ""),
                observer=analyst,
            )
        except (UnknownTermError, ObservationError) as exc:
            raise _bad_request(exc)
        except KeyError as exc:
            raise HTTPException(status_code=422, detail=f"missing field {exc}")
        return {"observation": obs.to_dict(), "ledger_position": len(platform.compliance)}

    @app.get("/compliance/summary")
    def compliance_summary(party: str, term_id: str, start: int, end: int):
        try:
            trend = platform.compliance.summary(party, term_id, start, end)
        except UnknownTermError as exc:
            raise _bad_request(exc)
        return trend.to_dict()

    # -- uplink over HTTP (file-replay transport) --------------------------------

    @app.post("/uplink/frames")
    async def uplink_frames(body: bytes = Body(..., media_type="application/octet-stream")):
        key = getattr(app.state, "uplink_key", None)
        if not key:
            raise HTTPException(status_code=503, detail="no uplink key configured on the server")
        persisted = 0
        frames = 0
        try:
            offset = 0
            while offset < len(body):
                frame_len = 4 + int.from_bytes(body[offset:offset + 4], "big")
                chunk = body[offset:offset + frame_len]
                events = platform.ingest_frame(chunk, key, connection="http")
                persisted += len(events)
                frames += 1
                offset += frame_len
        except (FrameAuthError, EventFormatError) as exc:
            raise _bad_request(exc)
        return {"frames": frames, "events_persisted": persisted}

    return app
