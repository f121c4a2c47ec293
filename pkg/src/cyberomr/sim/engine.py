"""Deterministic telemetry generation.

A run is a pure function of (model, duration, tick). Each link and each
scheduled attack draws from its own seeded RNG stream, so injecting an attack
never perturbs the clean draws of unrelated links; a traffic surge multiplies
exactly the bytes the clean run would have produced.

Attack semantics:
  traffic-surge     link bytes multiplied by magnitude while active
  host-takedown     target emits nothing; flows to or from it are suppressed
  rogue-asset       an off-model device (magnitude["host_id"]) sends flows to
                    the attachment target while active
  abnormal-control  one control message per tick to the target carrying a
                    function code outside the clean profile

The abnormal-control message shape (one off-profile function code per tick,
default code 99) is a modeling choice of this simulator, not a property of
any real control protocol; real abnormal traffic varies per site. It is
tunable through the magnitude descriptor (function_code, payload_size, src).
"""

import math
import random

from .archive import TelemetryArchive
from .model import AttackScenario, SiteModel
from .telemetry import Annotation, ControlMessage, DeviceLog, FlowRecord

ROGUE_DEFAULT_ID = "rogue-device"
ROGUE_DEFAULT_RATE = 500.0  # bytes/sec
ABNORMAL_DEFAULT_CODE = 99
_BYTES_PER_PACKET = 750


def _packets_for(nbytes: int) -> int:
    if nbytes <= 0:
        return 0
    return max(1, min(nbytes, round(nbytes / _BYTES_PER_PACKET)))


def _link_rng(seed: int, link_id: str) -> random.Random:
    return random.Random(f"{seed}|flow|{link_id}")


def _attack_rng(seed: int, scenario: AttackScenario) -> random.Random:
    return random.Random(f"{seed}|attack|{scenario.kind}|{scenario.target}|{scenario.start}")


def _abnormal_code(model: SiteModel, descriptor: dict) -> int:
    code = int(descriptor.get("function_code", ABNORMAL_DEFAULT_CODE))
    clean = {c for codes in model.control_profile.values() for c in codes}
    if code in clean:
        code = max(clean) + 1
    return code


def _abnormal_src(model: SiteModel, target: str, descriptor: dict) -> str:
    src = descriptor.get("src")
    if src:
        return src
    for link_id in model.control_profile:
        link = model.link(link_id)
        if link and link.dst == target:
            return link.src
    for host in model.hosts:
        if host.host_id != target:
            return host.host_id
    return target


def run(model: SiteModel, duration: float, tick: float) -> TelemetryArchive:
    """Generate the telemetry archive for one simulated interval."""
    if duration <= 0:
        raise ValueError(f"duration must be > 0, got {duration}")
    if tick <= 0:
        raise ValueError(f"tick must be > 0, got {tick}")
    model.validate()

    epoch = model.epoch_ms
    records: list = []

    link_rngs = {l.link_id: _link_rng(model.seed, l.link_id) for l in model.links}
    attack_rngs = {i: _attack_rng(model.seed, s) for i, s in enumerate(model.attack_schedule)}
    pair_counters = {link_id: 0 for link_id in model.control_profile}

    takedowns = [
        (s.start, s.start + s.duration, s.target)
        for s in model.attack_schedule
        if s.kind == "host-takedown"
    ]
    surges = [
        (s.start, s.start + s.duration, s.target, float(s.magnitude))
        for s in model.attack_schedule
        if s.kind == "traffic-surge"
    ]
    rogues = [
        (s.start, s.start + s.duration, i, s)
        for i, s in enumerate(model.attack_schedule)
        if s.kind == "rogue-asset"
    ]
    abnormals = [
        (s.start, s.start + s.duration, i, s)
        for i, s in enumerate(model.attack_schedule)
        if s.kind == "abnormal-control"
    ]

    log_offsets = {
        h.host_id: (idx % max(1, int(model.log_period)))
        for idx, h in enumerate(model.hosts)
    }

    t0 = 0.0
    while t0 < duration:
        t1 = min(t0 + tick, duration)
        span = t1 - t0
        ts0 = epoch + int(t0 * 1000)
        ts1 = epoch + int(t1 * 1000)

        down = {target for start, end, target in takedowns if start <= t0 < end}

        for link in model.links:
            profile = model.traffic_profile[link.link_id]
            rng = link_rngs[link.link_id]
            mean = profile.mean_rate * span
            draw = rng.gauss(mean, profile.jitter * mean)
            if link.src in down or link.dst in down:
                continue
            for start, end, target, mult in surges:
                if target == link.link_id and start <= t0 < end:
                    draw *= mult
            nbytes = max(0, round(draw))
            if nbytes == 0:
                continue
            records.append(
                FlowRecord(ts0, ts1, link.src, link.dst, profile.protocol, nbytes, _packets_for(nbytes))
            )

        for start, end, idx, scenario in rogues:
            if not start <= t0 < end or scenario.target in down:
                continue
            descriptor = scenario.magnitude if isinstance(scenario.magnitude, dict) else {}
            rogue_id = descriptor.get("host_id", ROGUE_DEFAULT_ID)
            rate = float(descriptor.get("rate", ROGUE_DEFAULT_RATE))
            rng = attack_rngs[idx]
            nbytes = max(1, round(rng.gauss(rate * span, 0.1 * rate * span)))
            records.append(
                FlowRecord(ts0, ts1, rogue_id, scenario.target, "tcp", nbytes, _packets_for(nbytes))
            )

        for link_id, codes in model.control_profile.items():
            link = model.link(link_id)
            if link.src in down or link.dst in down:
                continue
            counter = pair_counters[link_id]
            pair_counters[link_id] = counter + 1
            records.append(
                ControlMessage(ts0, link.src, link.dst, codes[counter % len(codes)], 24)
            )

        for start, end, idx, scenario in abnormals:
            if not start <= t0 < end or scenario.target in down:
                continue
            descriptor = scenario.magnitude if isinstance(scenario.magnitude, dict) else {}
            records.append(
                ControlMessage(
                    ts0,
                    _abnormal_src(model, scenario.target, descriptor),
                    scenario.target,
                    _abnormal_code(model, descriptor),
                    int(descriptor.get("payload_size", 64)),
                )
            )

        for host in model.hosts:
            if host.host_id in down:
                continue
            offset = log_offsets[host.host_id]
            # emit at each heartbeat instant offset + n*period falling in [t0, t1)
            n = math.ceil((t0 - offset) / model.log_period)
            beat = offset + n * model.log_period
            while t0 <= beat < t1:
                records.append(
                    DeviceLog(epoch + int(beat * 1000), host.host_id, "info", "status-ok")
                )
                beat += model.log_period

        t0 = t1

    annotations = []
    for i, scenario in enumerate(model.attack_schedule):
        if scenario.start >= duration:
            continue
        start_ms = epoch + int(scenario.start * 1000)
        end_ms = epoch + int(min(scenario.start + scenario.duration, duration) * 1000)
        detail: dict = {}
        if scenario.kind == "rogue-asset":
            descriptor = scenario.magnitude if isinstance(scenario.magnitude, dict) else {}
            detail["host_id"] = descriptor.get("host_id", ROGUE_DEFAULT_ID)
        if scenario.kind == "abnormal-control":
            descriptor = scenario.magnitude if isinstance(scenario.magnitude, dict) else {}
            detail["function_code"] = _abnormal_code(model, descriptor)
        if scenario.kind == "traffic-surge":
            detail["magnitude"] = scenario.magnitude
        annotations.append(
            Annotation(scenario.kind, scenario.target, start_ms, end_ms, detail)
        )

    return TelemetryArchive(
        site_id=model.site_id,
        records=tuple(records),
        annotations=tuple(annotations),
        epoch_ms=epoch,
        duration=duration,
        tick=tick,
    )
