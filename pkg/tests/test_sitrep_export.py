"""SITREP generation and report export round-trips."""

import pytest

from cyberomr.joc import CorrelationGroup, ManualClock
from cyberomr.reporting import (
    ExportError,
    FutureDayError,
    Sitrep,
    TicketStore,
    day_of,
    elapsed_days,
    export_report,
    generate_sitrep,
    parse_report,
)
from cyberomr.reporting.tickets import Ticket
from cyberomr.sensor import SensorEvent, UlidFactory

T0 = 1_767_571_200_000  # 2026-01-05T00:00:00Z
DAY = "2026-01-05"


def events_on_day(n, aor_id="office", kind="volume-anomaly", severity="warning"):
    ids = UlidFactory(f"sitrep-{aor_id}-{kind}")
    return [
        SensorEvent(
            event_id=ids.new(T0 + 1000 + i),
            aor_id=aor_id,
            sensor_id="s",
            kind=kind,
            ts=T0 + 1000 + i,
            severity=severity,
        )
        for i in range(n)
    ]


class TestGenerateSitrep:
    def test_zero_event_day_still_produces_document(self):
        report = generate_sitrep("office", DAY, [], now_ms=T0 + 90_000_000)
        assert report.total_events == 0
        assert report.counts_by_kind == {}
        assert "No reportable events" in report.narrative
        assert report.report_date == DAY

    def test_counts_and_ticket_refs(self):
        events = events_on_day(3) + events_on_day(2, kind="novel-control", severity="critical")
        store = TicketStore(clock=ManualClock(T0 + 5000))
        ticket = store.create_sincrep(
            {
                "start_time_of_event": T0 + 1000,
                "event_type": "novel-control",
                "supporting_evidence": ["x"],
                "aor_id": "office",
                "detecting_sensor": "s",
            }
        )
        report = generate_sitrep("office", DAY, events, store.all(), now_ms=T0 + 90_000_000)
        assert report.total_events == 5
        assert report.counts_by_kind == {"volume-anomaly": 3, "novel-control": 2}
        assert report.counts_by_severity == {"warning": 3, "critical": 2}
        assert report.ticket_refs_opened == (ticket.ticket_id,)

    def test_other_aor_and_other_day_events_excluded(self):
        events = events_on_day(3, aor_id="transmission")
        report = generate_sitrep("office", DAY, events, now_ms=T0 + 90_000_000)
        assert report.total_events == 0

    def test_two_generations_identical(self):
        events = events_on_day(4)
        a = generate_sitrep("office", DAY, events, now_ms=T0 + 90_000_000)
        b = generate_sitrep("office", DAY, events, now_ms=T0 + 90_000_000)
        assert a == b

    def test_future_day_rejected(self):
        with pytest.raises(FutureDayError):
            generate_sitrep("office", DAY, [], now_ms=T0 + 1000)

    def test_elapsed_days_enumerates_run(self):
        days = elapsed_days(T0, T0 + 2 * 86_400_000 + 5)
        assert days == ["2026-01-05", "2026-01-06"]
        assert day_of(T0) == DAY

    def test_scenario_day_counts_match_event_store(self, scenario_results, grid_model):
        events = [e for result in scenario_results.values() for e in result.events]
        office = generate_sitrep("office", DAY, events, now_ms=T0 + 2 * 86_400_000)
        assert office.counts_by_kind.get("volume-anomaly", 0) >= 1
        assert office.total_events == sum(
            1 for e in events if e.aor_id == "office"
        )
        generation = generate_sitrep("generation-1", DAY, events, now_ms=T0 + 2 * 86_400_000)
        assert generation.counts_by_kind.get("novel-control", 0) >= 1
        assert generation.counts_by_severity.get("critical", 0) >= 1

    def test_totality_exactly_one_sitrep_per_aor_per_elapsed_day(self):
        from cyberomr.joc import AoR, ManualClock, MonitoringMode
        from cyberomr.joc.api import Platform

        platform = Platform(clock=ManualClock(T0))
        for aor_id in ("office", "generation-1"):
            platform.engine.register_aor(
                AoR(aor_id, "power-grid", mode=MonitoringMode.batch(24, 2))
            )
        platform.clock.set(T0 + 3 * 86_400_000)
        days = elapsed_days(T0, platform.clock.now_ms())
        assert len(days) == 3
        seen = {}
        for aor_id in ("office", "generation-1"):
            for day in days:
                first = platform.sitrep(aor_id, day)
                second = platform.sitrep(aor_id, day)
                assert first == second  # one document per (AoR, day)
                seen[(aor_id, day)] = first
        assert len(seen) == 6


class TestExport:
    def _ticket(self):
        store = TicketStore(clock=ManualClock(T0))
        return store.create_sincrep(
            {
                "start_time_of_event": T0,
                "event_type": "novel-control",
                "supporting_evidence": [{"event_id": "E1", "evidence_ref": [3, 9]}],
                "aor_id": "generation-1",
                "detecting_sensor": "sensor-generation-1",
            },
            actor="alice",
        )

    def test_ticket_structured_round_trip(self):
        ticket = self._ticket()
        blob = export_report(ticket, "structured-data")
        assert parse_report(blob) == ticket

    def test_sitrep_structured_round_trip(self):
        report = generate_sitrep("office", DAY, events_on_day(2), now_ms=T0 + 90_000_000)
        assert parse_report(export_report(report)) == report

    def test_correlation_group_round_trip(self):
        group = CorrelationGroup(
            group_id="grp-abc",
            member_reports=(("cyber", "r1"), ("police", "r2")),
            region_tag="power-grid",
            window_start=T0,
            window_end=T0 + 420_000,
            summary="2 correlated reports",
        )
        assert parse_report(export_report(group)) == group

    def test_sitrep_plain_text_has_events_line_in_fixed_order(self):
        report = generate_sitrep("office", DAY, events_on_day(7), now_ms=T0 + 90_000_000)
        text = export_report(report, "plain-text").decode("utf-8")
        assert "EVENTS: 7" in text
        lines = text.splitlines()
        assert lines[0] == "DAILY SITUATION REPORT (SITREP)"
        assert lines[1] == "AOR: office"
        assert lines[2] == f"DATE: {DAY}"
        assert lines[3] == "EVENTS: 7"

    def test_ticket_plain_text_contains_all_mandatory_fields(self):
        text = export_report(self._ticket(), "plain-text").decode("utf-8")
        for label in ("START TIME OF EVENT:", "EVENT TYPE:", "AOR:",
                      "DETECTING SENSOR:", "SUPPORTING EVIDENCE:"):
            assert label in text

    def test_draft_ticket_export_rejected(self):
        draft = Ticket(
            ticket_id="T-999999",
            start_time_of_event=T0,
            event_type="x",
            supporting_evidence=["e"],
            aor_id="office",
            detecting_sensor="s",
            state="draft",
        )
        with pytest.raises(ExportError):
            export_report(draft, "structured-data")

    def test_unknown_format_rejected(self):
        with pytest.raises(ExportError):
            export_report(self._ticket(), "pdf")

    def test_sitrep_from_dict_inverse(self):
        report = generate_sitrep("office", DAY, events_on_day(1), now_ms=T0 + 90_000_000)
        assert Sitrep.from_dict(report.to_dict()) == report
