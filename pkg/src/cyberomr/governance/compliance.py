"""Ceasefire cooperation-compliance ledger.

Observations are events, not facts: the ledger is append-only, two identical
observations are two entries, and nothing is ever edited. Trends compare the
cooperative fraction between the first and second half of a time range;
movement within the configured threshold counts as stable.
"""

import itertools
import threading
from dataclasses import dataclass

from ..config import DEFAULT_CONFIG

COOPERATION_LEVELS = ("cooperative", "partial", "uncooperative")
DIRECTIONS = ("improving", "stable", "declining")


class UnknownTermError(ValueError):
    def __init__(self, term_id: str, terms: dict):
        self.term_id = term_id
        super().__init__(
            f"unknown ceasefire term {term_id!r}; configured terms: "
            + ", ".join(f"{k} ({v})" for k, v in sorted(terms.items()))
        )


class ObservationError(ValueError):
    pass


@dataclass(frozen=True)
class ComplianceObservation:
    obs_id: str
    party: str
    term_id: str
    ts: int  # UTC ms
    cooperation_level: str
    note: str
    observer: str  # analyst id

    def to_dict(self) -> dict:
        return {
            "obs_id": self.obs_id,
            "party": self.party,
            "term_id": self.term_id,
            "ts": self.ts,
            "cooperation_level": self.cooperation_level,
            "note": self.note,
            "observer": self.observer,
        }


@dataclass(frozen=True)
class ComplianceTrend:
    party: str
    term_id: str
    range_start: int
    range_end: int
    counts: dict  # cooperation_level -> n
    direction: str

    def to_dict(self) -> dict:
        return {
            "party": self.party,
            "term_id": self.term_id,
            "range_start": self.range_start,
            "range_end": self.range_end,
            "counts": dict(self.counts),
            "direction": self.direction,
        }


class ComplianceLedger:
    def __init__(self, config: dict | None = None):
        self.config = config or DEFAULT_CONFIG
        self.terms: dict[str, str] = dict(self.config["ceasefire_terms"])
        self.threshold: float = self.config["compliance"]["trend_threshold"]
        self._entries: list[ComplianceObservation] = []
        self._counter = itertools.count(1)
        self._lock = threading.RLock()

    def record(
        self,
        party: str,
        term_id: str,
        ts: int,
        cooperation_level: str,
        note: str = "",
        observer: str = "",
    ) -> ComplianceObservation:
        """Append one observation; returns it with its ledger id."""
        if term_id not in self.terms:
            raise UnknownTermError(term_id, self.terms)
        if cooperation_level not in COOPERATION_LEVELS:
            raise ObservationError(
                f"cooperation_level must be one of {COOPERATION_LEVELS}, got {cooperation_level!r}"
            )
        with self._lock:
            obs = ComplianceObservation(
                obs_id=f"obs-{next(self._counter):06d}",
                party=party,
                term_id=term_id,
                ts=int(ts),
                cooperation_level=cooperation_level,
                note=note,
                observer=observer,
            )
            self._entries.append(obs)
            return obs

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> list[ComplianceObservation]:
        return list(self._entries)

    def summary(self, party: str, term_id: str, range_start: int, range_end: int) -> ComplianceTrend:
        """Counts per cooperation level over the range plus a trend direction.

        Direction compares the cooperative fraction of the first half of the
        range against the second; a half with no observations gives no signal,
        so the trend is stable. An empty or inverted range is an empty trend.
        """
        counts = dict.fromkeys(COOPERATION_LEVELS, 0)
        if range_end <= range_start:
            return ComplianceTrend(party, term_id, range_start, range_end, counts, "stable")

        selected = [
            obs
            for obs in self._entries
            if obs.party == party
            and obs.term_id == term_id
            and range_start <= obs.ts < range_end
        ]
        for obs in selected:
            counts[obs.cooperation_level] += 1

        mid = (range_start + range_end) // 2
        first = [o for o in selected if o.ts < mid]
        second = [o for o in selected if o.ts >= mid]
        if not first or not second:
            direction = "stable"
        else:
            frac_first = sum(1 for o in first if o.cooperation_level == "cooperative") / len(first)
            frac_second = sum(1 for o in second if o.cooperation_level == "cooperative") / len(second)
            delta = frac_second - frac_first
            if delta > self.threshold:
                direction = "improving"
            elif delta < -self.threshold:
                direction = "declining"
            else:
                direction = "stable"
        return ComplianceTrend(party, term_id, range_start, range_end, counts, direction)
