"""Management API surface: routing, errors, analyst attribution, SSE."""

import pytest
from fastapi.testclient import TestClient

from cyberomr.joc import ManualClock
from cyberomr.joc.api import CAPABILITIES, Platform, create_app
from cyberomr.sensor import SensorEvent, UlidFactory, Uplink

KEY = b"api-test-key"
T0 = 1_767_571_200_000


@pytest.fixture()
def client():
    platform = Platform(clock=ManualClock(T0))
    app = create_app(platform)
    app.state.uplink_key = KEY
    with TestClient(app) as test_client:
        test_client.platform = platform
        yield test_client


def register_office(client, mode="batch"):
    return client.post(
        "/aors",
        json={
            "aor_id": "office",
            "site_id": "power-grid",
            "label": "Corporate office",
            "mode": {"kind": mode, "interval_hours": 24, "review_hours": 2},
            "region_tag": "power-grid",
        },
    )


def make_events(n, severity="warning", kind="volume-anomaly", aor_id="office"):
    ids = UlidFactory(f"api-{kind}-{severity}")
    return [
        SensorEvent(
            event_id=ids.new(T0 + i * 1000),
            aor_id=aor_id,
            sensor_id=f"sensor-{aor_id}",
            kind=kind,
            ts=T0 + i * 1000,
            severity=severity,
        )
        for i in range(n)
    ]


def push_events(client, events):
    frames = Uplink(KEY).transmit(sorted(events, key=lambda e: e.event_id))
    blob = b"".join(f.to_bytes() for f in frames)
    response = client.post(
        "/uplink/frames", content=blob, headers={"content-type": "application/octet-stream"}
    )
    assert response.status_code == 200
    return response.json()


class TestAorsAndEvents:
    def test_register_and_list(self, client):
        assert register_office(client).status_code == 200
        listed = client.get("/aors").json()["aors"]
        assert [a["aor_id"] for a in listed] == ["office"]
        assert client.get("/aors/office").json()["mode"]["kind"] == "batch"
        assert client.get("/aors/nowhere").status_code == 404

    def test_uplink_post_persists_and_filters(self, client):
        register_office(client)
        push_events(client, make_events(4) + make_events(2, "critical", "novel-control"))
        assert client.get("/events").json()["total"] == 6
        critical = client.get("/events", params={"severity": "critical"}).json()
        assert critical["total"] == 2
        by_kind = client.get("/events", params={"kind": "volume-anomaly"}).json()
        assert by_kind["total"] == 4

    def test_replayed_frames_stay_idempotent(self, client):
        register_office(client)
        events = make_events(3)
        push_events(client, events)
        result = push_events(client, events)
        assert result["events_persisted"] == 0
        assert client.get("/events").json()["total"] == 3

    def test_unroutable_events_land_in_dead_letter(self, client):
        push_events(client, make_events(1, aor_id="ghost-aor"))
        entries = client.get("/dead-letter").json()["entries"]
        assert len(entries) == 1
        assert "ghost-aor" in entries[0]["reason"]

    def test_stream_endpoint_emits_keepalives_and_closes_on_timeout(self, client):
        # delivery through a live socket is exercised in test_live_server.py;
        # TestClient buffers streaming responses, so only framing is checked here
        register_office(client)
        with client.stream(
            "GET", "/events/stream", params={"max_events": 1, "timeout": 0.5}
        ) as stream:
            lines = list(stream.iter_lines())
        assert lines[0].startswith(": connected")
        assert any(line.startswith(": keepalive") for line in lines)


class TestBatchFlow:
    def test_close_and_dual_sign_off(self, client):
        register_office(client)
        push_events(client, make_events(2))
        batch_id = client.get("/batches").json()["batches"][0]["batch_id"]

        early = client.post("/aors/office/close-batch", json={})
        assert early.status_code == 409

        client.platform.clock.advance(24 * 3_600_000)
        closed = client.post("/aors/office/close-batch", json={}).json()
        assert closed["state"] == "under-review"
        assert closed["batch_id"] == batch_id

        no_analyst = client.post(f"/batches/{batch_id}/sign-off", json={})
        assert no_analyst.status_code == 422

        client.post(f"/batches/{batch_id}/sign-off", json={"analyst_id": "alice"})
        again = client.post(f"/batches/{batch_id}/sign-off", json={"analyst_id": "alice"})
        assert again.status_code == 409

        done = client.post(f"/batches/{batch_id}/sign-off", json={"analyst_id": "bob"}).json()
        assert done["state"] == "signed-off"


class TestTicketsOverApi:
    def test_create_from_event_transition_export(self, client):
        register_office(client)
        push_events(client, make_events(1, "critical", "novel-control"))
        event_id = client.get("/events").json()["events"][0]["event_id"]

        created = client.post(
            "/tickets", json={"source_event_id": event_id, "analyst_id": "alice"}
        )
        assert created.status_code == 200
        ticket = created.json()
        assert ticket["state"] == "submitted"
        assert ticket["supporting_evidence"][0]["event_id"] == event_id

        missing_analyst = client.post("/tickets", json={"source_event_id": event_id})
        assert missing_analyst.status_code == 422

        bad = client.post(
            "/tickets",
            json={
                "analyst_id": "alice",
                "fields": {"event_type": "x", "aor_id": "office"},
            },
        )
        assert bad.status_code == 400
        assert "detecting_sensor" in bad.json()["detail"]

        tid = ticket["ticket_id"]
        moved = client.post(
            f"/tickets/{tid}/transition", json={"action": "acknowledge", "analyst_id": "bob"}
        )
        assert moved.json()["state"] == "acknowledged"

        illegal = client.post(
            f"/tickets/{tid}/transition", json={"action": "close", "analyst_id": "bob"}
        )
        assert illegal.status_code == 409
        assert "acknowledged" in illegal.json()["detail"]

        text = client.get(f"/tickets/{tid}/export", params={"format": "plain-text"})
        assert "SPECIAL INCIDENT REPORT" in text.text
        structured = client.get(f"/tickets/{tid}/export")
        assert structured.json()["report_type"] == "ticket"

    def test_ticket_projects_cyber_unit_report_for_correlation(self, client):
        register_office(client)
        push_events(client, make_events(1, "critical", "novel-control"))
        event_id = client.get("/events").json()["events"][0]["event_id"]
        client.post("/tickets", json={"source_event_id": event_id, "analyst_id": "alice"})

        client.post(
            "/unit-reports",
            json={
                "report_id": "police-0441",
                "unit_type": "police",
                "region_tag": "power-grid",
                "start_ms": T0 + 7 * 60_000,
                "end_ms": T0 + 7 * 60_000,
                "summary": "brief power loss reported",
            },
        )
        groups = client.get("/correlations").json()["groups"]
        assert len(groups) == 1
        units = {m[0] for m in groups[0]["member_reports"]}
        assert units == {"cyber", "police"}


class TestSitrepOverApi:
    def test_sitrep_generated_and_cached(self, client):
        register_office(client)
        push_events(client, make_events(3))
        client.platform.clock.advance(2 * 86_400_000)
        first = client.get("/sitreps/office/2026-01-05").json()
        second = client.get("/sitreps/office/2026-01-05").json()
        assert first == second
        assert first["total_events"] == 3

        text = client.get("/sitreps/office/2026-01-05", params={"format": "plain-text"})
        assert "EVENTS: 3" in text.text

    def test_future_day_and_unknown_aor(self, client):
        register_office(client)
        assert client.get("/sitreps/office/2077-01-01").status_code == 400
        assert client.get("/sitreps/ghost/2026-01-05").status_code == 404


class TestGovernanceOverApi:
    def test_assessment_endpoint(self, client):
        response = client.post(
            "/assessments",
            json={
                "site_id": "presidents-office",
                "peace_contribution": 0,
                "local_support": 2,
                "capacity": 2,
                "justification": "traditional ICT site, limited peace value",
            },
        )
        assert response.json()["recommendation"]["label"] == "Deny"

    def test_compliance_record_and_summary(self, client):
        for i in range(4):
            response = client.post(
                "/compliance",
                json={
                    "party": "country-a",
                    "term_id": "term-1",
                    "ts": T0 + i * 3_600_000,
                    "cooperation_level": "cooperative",
                    "analyst_id": "alice",
                },
            )
            assert response.status_code == 200
        assert response.json()["ledger_position"] == 4

        unknown = client.post(
            "/compliance",
            json={
                "party": "country-a",
                "term_id": "term-99",
                "cooperation_level": "cooperative",
                "analyst_id": "alice",
            },
        )
        assert unknown.status_code == 400

        summary = client.get(
            "/compliance/summary",
            params={"party": "country-a", "term_id": "term-1",
                    "start": T0, "end": T0 + 10 * 3_600_000},
        ).json()
        assert summary["counts"]["cooperative"] == 4

    def test_compliance_requires_analyst(self, client):
        response = client.post(
            "/compliance",
            json={"party": "a", "term_id": "term-1", "cooperation_level": "partial"},
        )
        assert response.status_code == 422


class TestIntegrityAndManifest:
    def test_tampered_frame_reports_integrity_warning(self, client):
        register_office(client)
        frames = Uplink(KEY).transmit(make_events(1))
        blob = bytearray(frames[0].to_bytes())
        blob[-1] ^= 0x01
        response = client.post(
            "/uplink/frames", content=bytes(blob),
            headers={"content-type": "application/octet-stream"},
        )
        assert response.status_code == 400
        warnings = client.get("/integrity").json()["warnings"]
        assert any("authentication" in w["kind"] for w in warnings)

    def test_manifest_lists_capabilities(self, client):
        capabilities = client.get("/manifest").json()["capabilities"]
        assert capabilities == CAPABILITIES
        assert {c["capability"] for c in capabilities} >= {
            "register-aor", "list-events", "event-stream", "fetch-batch",
            "sign-off-batch", "fetch-correlations", "create-ticket",
            "transition-ticket", "fetch-sitrep", "submit-assessment",
            "record-compliance",
        }
