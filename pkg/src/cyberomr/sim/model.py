"""Site model for the conflict-site telemetry simulator.

A SiteModel describes one monitored site: its hosts partitioned into areas of
responsibility (AoRs), the links between them with nominal traffic rates, the
clean control-plane profile, and a schedule of attack scenarios to inject.
Models are immutable values; attack injection returns a new model.
"""

import json
from dataclasses import dataclass, replace

HOST_ROLES = ("workstation", "server", "controller", "hmi", "network-device")
ATTACK_KINDS = ("traffic-surge", "host-takedown", "rogue-asset", "abnormal-control")


class SiteValidationError(ValueError):
    """Raised when a site config violates model invariants.

    Carries the list of offending fields so callers can report all problems
    at once instead of fixing them one by one.
    """

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid site config: " + "; ".join(self.problems))


class UnknownTargetError(ValueError):
    """Attack scenario names a host or link the model does not contain."""


class OverlappingTakedownError(ValueError):
    """Two host-takedown scenarios overlap on the same host (undefined semantics)."""


@dataclass(frozen=True)
class HostSpec:
    host_id: str
    aor_id: str
    role: str


@dataclass(frozen=True)
class LinkSpec:
    src: str
    dst: str
    nominal_rate: float  # bytes/sec

    @property
    def link_id(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class AttackScenario:
    kind: str
    target: str            # host_id, or "src->dst" for link targets
    start: float           # sim-time seconds
    duration: float        # seconds
    magnitude: object = None  # multiplier (traffic-surge) or descriptor dict

    def validate(self) -> list[str]:
        problems = []
        if self.kind not in ATTACK_KINDS:
            problems.append(f"attack kind {self.kind!r} not one of {ATTACK_KINDS}")
        if self.start < 0:
            problems.append(f"attack start {self.start} must be >= 0")
        if self.duration <= 0:
            problems.append(f"attack duration {self.duration} must be > 0")
        if self.kind == "traffic-surge":
            if not isinstance(self.magnitude, (int, float)) or self.magnitude <= 1:
                problems.append("traffic-surge magnitude must be a multiplier > 1")
        return problems

    def interval_ms(self, epoch_ms: int) -> tuple[int, int]:
        start = epoch_ms + int(self.start * 1000)
        return start, start + int(self.duration * 1000)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "start": self.start,
            "duration": self.duration,
            "magnitude": self.magnitude,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "AttackScenario":
        return cls(
            kind=raw["kind"],
            target=raw["target"],
            start=float(raw["start"]),
            duration=float(raw["duration"]),
            magnitude=raw.get("magnitude"),
        )


@dataclass(frozen=True)
class TrafficProfile:
    """Per-link mean rate (bytes/sec), jitter fraction, and protocol tag."""

    mean_rate: float
    jitter: float
    protocol: str = "tcp"


@dataclass(frozen=True)
class SiteModel:
    site_id: str
    hosts: tuple[HostSpec, ...]
    links: tuple[LinkSpec, ...]
    aors: dict[str, str]                      # aor_id -> label
    traffic_profile: dict[str, TrafficProfile]  # link_id -> profile
    control_profile: dict[str, tuple[int, ...]]  # link_id -> clean function codes
    attack_schedule: tuple[AttackScenario, ...] = ()
    seed: int = 0
    epoch_ms: int = 0
    log_period: float = 60.0                  # seconds between device heartbeat logs

    def host(self, host_id: str) -> HostSpec | None:
        for spec in self.hosts:
            if spec.host_id == host_id:
                return spec
        return None

    def link(self, link_id: str) -> LinkSpec | None:
        for spec in self.links:
            if spec.link_id == link_id:
                return spec
        return None

    @property
    def host_ids(self) -> list[str]:
        return [h.host_id for h in self.hosts]

    def aor_of(self, host_id: str) -> str | None:
        spec = self.host(host_id)
        return spec.aor_id if spec else None

    def roles(self) -> dict[str, str]:
        return {h.host_id: h.role for h in self.hosts}

    def host_aors(self) -> dict[str, str]:
        return {h.host_id: h.aor_id for h in self.hosts}

    def validate(self) -> None:
        problems = []
        seen_hosts: set[str] = set()
        for spec in self.hosts:
            if spec.host_id in seen_hosts:
                problems.append(f"host {spec.host_id!r} defined more than once")
            seen_hosts.add(spec.host_id)
            if spec.aor_id not in self.aors:
                problems.append(f"host {spec.host_id!r} assigned to unknown AoR {spec.aor_id!r}")
            if spec.role not in HOST_ROLES:
                problems.append(f"host {spec.host_id!r} has unknown role {spec.role!r}")
        for link in self.links:
            for end in (link.src, link.dst):
                if end not in seen_hosts:
                    problems.append(f"link {link.link_id!r} references unknown host {end!r}")
            if link.nominal_rate < 0:
                problems.append(f"link {link.link_id!r} nominal_rate must be >= 0")
        for link_id, profile in self.traffic_profile.items():
            if self.link(link_id) is None:
                problems.append(f"traffic profile references unknown link {link_id!r}")
            if profile.mean_rate < 0:
                problems.append(f"traffic profile for {link_id!r}: mean_rate must be >= 0")
            if not 0 <= profile.jitter <= 1:
                problems.append(f"traffic profile for {link_id!r}: jitter must be in [0, 1]")
        for link_id in self.control_profile:
            if self.link(link_id) is None:
                problems.append(f"control profile references unknown link {link_id!r}")
        for scenario in self.attack_schedule:
            problems.extend(scenario.validate())
        if problems:
            raise SiteValidationError(problems)

    def to_dict(self) -> dict:
        return {
            "site_id": self.site_id,
            "seed": self.seed,
            "epoch_ms": self.epoch_ms,
            "log_period": self.log_period,
            "aors": dict(self.aors),
            "hosts": [
                {"host_id": h.host_id, "aor_id": h.aor_id, "role": h.role}
                for h in self.hosts
            ],
            "links": [
                {"src": l.src, "dst": l.dst, "nominal_rate": float(l.nominal_rate)}
                for l in self.links
            ],
            "traffic_profile": {
                link_id: {
                    "mean_rate": float(p.mean_rate),
                    "jitter": float(p.jitter),
                    "protocol": p.protocol,
                }
                for link_id, p in self.traffic_profile.items()
            },
            "control_profile": {
                link_id: list(codes) for link_id, codes in self.control_profile.items()
            },
            "attack_schedule": [s.to_dict() for s in self.attack_schedule],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, raw: dict) -> "SiteModel":
        return cls(
            site_id=raw["site_id"],
            hosts=tuple(
                HostSpec(h["host_id"], h["aor_id"], h["role"]) for h in raw.get("hosts", [])
            ),
            links=tuple(
                LinkSpec(l["src"], l["dst"], float(l["nominal_rate"]))
                for l in raw.get("links", [])
            ),
            aors=dict(raw.get("aors", {})),
            traffic_profile={
                link_id: TrafficProfile(
                    mean_rate=float(p["mean_rate"]),
                    jitter=float(p["jitter"]),
                    protocol=p.get("protocol", "tcp"),
                )
                for link_id, p in raw.get("traffic_profile", {}).items()
            },
            control_profile={
                link_id: tuple(int(c) for c in codes)
                for link_id, codes in raw.get("control_profile", {}).items()
            },
            attack_schedule=tuple(
                AttackScenario.from_dict(s) for s in raw.get("attack_schedule", [])
            ),
            seed=int(raw.get("seed", 0)),
            epoch_ms=int(raw.get("epoch_ms", 0)),
            log_period=float(raw.get("log_period", 60.0)),
        )


def inject_attack(model: SiteModel, scenario: AttackScenario) -> SiteModel:
    """Return a copy of the model with the scenario appended to its schedule.

    The original schedule order is preserved. Targets must exist in the model;
    for rogue-asset the target is the existing host the rogue device attaches
    to (the rogue's own id comes from the magnitude descriptor).
    """
    problems = scenario.validate()
    if problems:
        raise SiteValidationError(problems)

    if scenario.kind == "traffic-surge":
        if model.link(scenario.target) is None:
            raise UnknownTargetError(
                f"traffic-surge target link {scenario.target!r} not in model"
            )
    else:
        if model.host(scenario.target) is None:
            raise UnknownTargetError(
                f"{scenario.kind} target host {scenario.target!r} not in model"
            )

    if scenario.kind == "host-takedown":
        new_start, new_end = scenario.start, scenario.start + scenario.duration
        for existing in model.attack_schedule:
            if existing.kind != "host-takedown" or existing.target != scenario.target:
                continue
            old_start, old_end = existing.start, existing.start + existing.duration
            if new_start < old_end and old_start < new_end:
                raise OverlappingTakedownError(
                    f"host-takedown on {scenario.target!r} overlaps an existing takedown"
                )

    return replace(model, attack_schedule=model.attack_schedule + (scenario,))
