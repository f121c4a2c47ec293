"""Cross-unit report correlation.

Reports from different unit types (cyber, police, military, civilian) that
share a region tag and lie close together in time describe one situation.
Linkage is pairwise (same key, interval gap within the window) and grouping
is the transitive closure, so a chain A~B~C forms one group even when A and C
are not directly linked. Singletons are discarded: a group is only a group
when it connects at least two reports.
"""

import hashlib
from dataclasses import dataclass

UNIT_TYPES = ("cyber", "police", "military", "civilian")


@dataclass(frozen=True)
class UnitReport:
    report_id: str
    unit_type: str
    region_tag: str
    start_ms: int
    end_ms: int
    summary: str = ""

    def to_dict(self) -> dict:
        return {
            "report_id": self.report_id,
            "unit_type": self.unit_type,
            "region_tag": self.region_tag,
            "start_ms": self.start_ms,
            "end_ms": self.end_ms,
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "UnitReport":
        return cls(
            report_id=raw["report_id"],
            unit_type=raw["unit_type"],
            region_tag=raw["region_tag"],
            start_ms=int(raw["start_ms"]),
            end_ms=int(raw["end_ms"]),
            summary=raw.get("summary", ""),
        )


@dataclass(frozen=True)
class CorrelationGroup:
    group_id: str
    member_reports: tuple[tuple[str, str], ...]  # (unit_type, report_id)
    region_tag: str
    window_start: int
    window_end: int
    summary: str

    def to_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "member_reports": [list(m) for m in self.member_reports],
            "region_tag": self.region_tag,
            "window_start": self.window_start,
            "window_end": self.window_end,
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "CorrelationGroup":
        return cls(
            group_id=raw["group_id"],
            member_reports=tuple((m[0], m[1]) for m in raw["member_reports"]),
            region_tag=raw["region_tag"],
            window_start=int(raw["window_start"]),
            window_end=int(raw["window_end"]),
            summary=raw.get("summary", ""),
        )


def reports_linked(a: UnitReport, b: UnitReport, window: float, key=None) -> bool:
    """True when two reports should be in the same group.

    The gap between intervals must be within `window` seconds; overlapping
    intervals have gap zero.
    """
    key = key or (lambda r: r.region_tag)
    if key(a) != key(b):
        return False
    gap_ms = max(a.start_ms, b.start_ms) - min(a.end_ms, b.end_ms)
    return gap_ms <= window * 1000


def correlate_reports(reports, window: float, key=None) -> list[CorrelationGroup]:
    """Group reports by single-linkage closure; groups of one are dropped.

    Output is deterministic regardless of input order: reports are sorted by
    report_id before grouping and groups are ordered by their first member.
    """
    key = key or (lambda r: r.region_tag)
    ordered = sorted(reports, key=lambda r: r.report_id)
    n = len(ordered)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for i in range(n):
        for j in range(i + 1, n):
            if reports_linked(ordered[i], ordered[j], window, key):
                union(i, j)

    members: dict[int, list[UnitReport]] = {}
    for i in range(n):
        members.setdefault(find(i), []).append(ordered[i])

    groups = []
    for root in sorted(members):
        group = members[root]
        if len(group) < 2:
            continue
        ids = [r.report_id for r in group]
        digest = hashlib.sha256("|".join(ids).encode("utf-8")).hexdigest()[:10]
        region = key(group[0])
        start = min(r.start_ms for r in group)
        end = max(r.end_ms for r in group)
        unit_counts: dict[str, int] = {}
        for r in group:
            unit_counts[r.unit_type] = unit_counts.get(r.unit_type, 0) + 1
        breakdown = ", ".join(f"{c} {u}" for u, c in sorted(unit_counts.items()))
        groups.append(
            CorrelationGroup(
                group_id=f"grp-{digest}",
                member_reports=tuple((r.unit_type, r.report_id) for r in group),
                region_tag=str(region),
                window_start=start,
                window_end=end,
                summary=f"{len(group)} correlated reports ({breakdown}) in region {region}",
            )
        )
    return groups
