"""Control-plane baselining and novel-message detection.

Model-based detection for the control plane: a learning window of presumed
clean operation freezes the set of (src, dst) -> function-code triples allowed
at the site; anything outside that set afterwards is critical. Learning
windows shorter than the configured minimum are rejected outright rather than
silently accepted, because a baseline learned from too little observation is
not trustworthy evidence.
"""

from dataclasses import dataclass, field

from .events import SensorEvent, UlidFactory, severity_for

MIN_LEARNING_WINDOW = 3600  # seconds


class LearningWindowError(ValueError):
    """Learning window shorter than the configured minimum."""


class BaselineStateError(RuntimeError):
    """Operation requires a frozen (or unfrozen) baseline."""


@dataclass
class ControlBaseline:
    window: tuple[int, int]  # (start, end) UTC ms
    allowed: dict[tuple[str, str], frozenset[int]] = field(default_factory=dict)
    frozen: bool = False

    def permits(self, src: str, dst: str, function_code: int) -> bool:
        return function_code in self.allowed.get((src, dst), frozenset())

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "frozen": self.frozen,
            "allowed": {
                f"{src}->{dst}": sorted(codes)
                for (src, dst), codes in sorted(self.allowed.items())
            },
        }


def learn_control_baseline(
    messages,
    window: int,
    start_ms: int | None = None,
    min_window: int = MIN_LEARNING_WINDOW,
) -> ControlBaseline:
    """Freeze the allowed control-plane behaviour from a clean window.

    ``window`` is the learning span in seconds, measured from ``start_ms`` (or
    from the first message when omitted). Messages outside the window are
    ignored. An empty stream over a valid window freezes an empty baseline.
    """
    if window < min_window:
        raise LearningWindowError(
            f"learning window {window}s is shorter than the required minimum {min_window}s"
        )
    observed: dict[tuple[str, str], set[int]] = {}
    first_ts = start_ms
    end_ts = None if first_ts is None else first_ts + window * 1000
    for message in messages:
        if first_ts is None:
            first_ts = message.ts
            end_ts = first_ts + window * 1000
        if message.ts < first_ts or message.ts >= end_ts:
            continue
        observed.setdefault((message.src, message.dst), set()).add(message.function_code)
    if first_ts is None:
        first_ts = 0
        end_ts = window * 1000
    return ControlBaseline(
        window=(first_ts, end_ts),
        allowed={pair: frozenset(codes) for pair, codes in observed.items()},
        frozen=True,
    )


def detect_novel_control(
    messages,
    baseline: ControlBaseline,
    aor_id: str = "",
    sensor_id: str = "",
    severity_map: dict | None = None,
    ids: UlidFactory | None = None,
    record_offset: int = 0,
) -> list[SensorEvent]:
    """Emit one critical event per message outside the frozen baseline."""
    if not baseline.frozen:
        raise BaselineStateError("novel-control detection requires a frozen baseline")
    ids = ids or UlidFactory()
    sensor_id = sensor_id or f"sensor-{aor_id}"
    events = []
    for index, message in enumerate(messages):
        if baseline.permits(message.src, message.dst, message.function_code):
            continue
        events.append(
            SensorEvent(
                event_id=ids.new(message.ts),
                aor_id=aor_id,
                sensor_id=sensor_id,
                kind="novel-control",
                ts=message.ts,
                severity=severity_for("novel-control", severity_map=severity_map),
                detail={
                    "src": message.src,
                    "dst": message.dst,
                    "function_code": message.function_code,
                },
                evidence_ref=(record_offset + index, record_offset + index),
            )
        )
    return events
