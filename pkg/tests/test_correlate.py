"""Report correlation: worked example, closure semantics, brute-force oracle."""

import itertools

from hypothesis import given, settings, strategies as st

from cyberomr.joc import UnitReport, correlate_reports, reports_linked

NOON = 1_767_614_400_000  # 2026-01-05T12:00:00Z


def point(report_id, unit, region, ts_ms):
    return UnitReport(report_id, unit, region, ts_ms, ts_ms)


def brute_force_groups(reports, window):
    """Independent oracle: explicit pairwise linkage + transitive closure."""
    reports = sorted(reports, key=lambda r: r.report_id)
    groups = [{r.report_id} for r in reports]
    by_id = {r.report_id: r for r in reports}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(by_id), 2):
            if not reports_linked(by_id[a], by_id[b], window):
                continue
            ga = next(g for g in groups if a in g)
            gb = next(g for g in groups if b in g)
            if ga is not gb:
                ga.update(gb)
                groups.remove(gb)
                changed = True
    return sorted(tuple(sorted(g)) for g in groups if len(g) >= 2)


class TestCorrelateReports:
    def test_cyber_and_police_reports_seven_minutes_apart_form_one_group(self):
        cyber = point("sincrep-T-000001", "cyber", "power-grid", NOON)
        police = point("police-0441", "police", "power-grid", NOON + 7 * 60_000)
        groups = correlate_reports([cyber, police], window=900)
        assert len(groups) == 1
        assert set(groups[0].member_reports) == {
            ("cyber", "sincrep-T-000001"),
            ("police", "police-0441"),
        }

    def test_same_reports_with_60s_window_do_not_group(self):
        cyber = point("sincrep-T-000001", "cyber", "power-grid", NOON)
        police = point("police-0441", "police", "power-grid", NOON + 7 * 60_000)
        assert correlate_reports([cyber, police], window=60) == []

    def test_different_regions_never_group(self):
        a = point("r1", "cyber", "north", NOON)
        b = point("r2", "police", "south", NOON)
        assert correlate_reports([a, b], window=900) == []

    def test_chain_closure_groups_all_three(self):
        a = point("a", "cyber", "x", NOON)
        b = point("b", "police", "x", NOON + 800_000)
        c = point("c", "military", "x", NOON + 1_600_000)
        assert not reports_linked(a, c, 900)
        groups = correlate_reports([a, b, c], window=900)
        assert len(groups) == 1
        assert {m[1] for m in groups[0].member_reports} == {"a", "b", "c"}

    def test_singletons_discarded(self):
        groups = correlate_reports([point("solo", "cyber", "x", NOON)], window=900)
        assert groups == []

    def test_output_independent_of_input_order(self):
        reports = [
            point("a", "cyber", "x", NOON),
            point("b", "police", "x", NOON + 100_000),
            point("c", "civilian", "y", NOON),
            point("d", "military", "y", NOON + 200_000),
        ]
        forward = correlate_reports(reports, window=900)
        backward = correlate_reports(list(reversed(reports)), window=900)
        assert [g.to_dict() for g in forward] == [g.to_dict() for g in backward]

    def test_overlapping_intervals_have_zero_gap(self):
        a = UnitReport("a", "cyber", "x", NOON, NOON + 600_000)
        b = UnitReport("b", "police", "x", NOON + 300_000, NOON + 900_000)
        assert reports_linked(a, b, 0)


@settings(max_examples=150)
@given(
    st.lists(
        st.tuples(
            st.sampled_from(["cyber", "police", "military", "civilian"]),
            st.sampled_from(["north", "south"]),
            st.integers(min_value=0, max_value=7200),   # start offset s
            st.integers(min_value=0, max_value=600),    # duration s
        ),
        max_size=12,
    ),
    st.integers(min_value=0, max_value=1800),
)
def test_grouping_matches_brute_force_oracle(raw, window):
    reports = [
        UnitReport(f"r{i:02d}", unit, region, NOON + start * 1000, NOON + (start + dur) * 1000)
        for i, (unit, region, start, dur) in enumerate(raw)
    ]
    groups = correlate_reports(reports, window=window)
    ours = sorted(tuple(sorted(m[1] for m in g.member_reports)) for g in groups)
    assert ours == brute_force_groups(reports, window)
