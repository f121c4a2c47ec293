"""Bundled site templates and config-document loading.

The power-grid template models a national grid operator at desk scale:
two generation plants, a transmission network, a corporate office, and the
control centre, partitioned into one AoR each (generation gets two). 25 hosts
total. Rates are bytes/sec; control links carry a cycling set of four clean
function codes per (src, dst) pair.
"""

from pathlib import Path

import yaml

from .model import HostSpec, LinkSpec, SiteModel, SiteValidationError, TrafficProfile

POWER_GRID_AORS = {
    "generation-1": "Generation plant 1",
    "generation-2": "Generation plant 2",
    "transmission": "Transmission network",
    "office": "Corporate office",
    "control-centre": "Control centre",
}

# host_id, aor_id, role
_POWER_GRID_HOSTS = [
    ("gen1-plc-1", "generation-1", "controller"),
    ("gen1-plc-2", "generation-1", "controller"),
    ("gen1-hmi", "generation-1", "hmi"),
    ("gen1-hist", "generation-1", "server"),
    ("gen2-plc-1", "generation-2", "controller"),
    ("gen2-plc-2", "generation-2", "controller"),
    ("gen2-hmi", "generation-2", "hmi"),
    ("gen2-hist", "generation-2", "server"),
    ("tx-plc-1", "transmission", "controller"),
    ("tx-plc-2", "transmission", "controller"),
    ("tx-plc-3", "transmission", "controller"),
    ("tx-hmi", "transmission", "hmi"),
    ("tx-gw", "transmission", "network-device"),
    ("off-ws-1", "office", "workstation"),
    ("off-ws-2", "office", "workstation"),
    ("off-ws-3", "office", "workstation"),
    ("off-file", "office", "server"),
    ("off-mail", "office", "server"),
    ("off-gw", "office", "network-device"),
    ("cc-scada-1", "control-centre", "server"),
    ("cc-scada-2", "control-centre", "server"),
    ("cc-hmi-1", "control-centre", "hmi"),
    ("cc-hist", "control-centre", "server"),
    ("cc-fw", "control-centre", "network-device"),
    ("cc-ws-1", "control-centre", "workstation"),
]

# src, dst, mean bytes/sec, jitter fraction, protocol
_POWER_GRID_LINKS = [
    ("gen1-hmi", "gen1-plc-1", 2_000, 0.05, "scada"),
    ("gen1-hmi", "gen1-plc-2", 2_000, 0.05, "scada"),
    ("gen1-plc-1", "gen1-hist", 8_000, 0.08, "hist"),
    ("gen1-plc-2", "gen1-hist", 8_000, 0.08, "hist"),
    ("gen2-hmi", "gen2-plc-1", 2_000, 0.05, "scada"),
    ("gen2-hmi", "gen2-plc-2", 2_000, 0.05, "scada"),
    ("gen2-plc-1", "gen2-hist", 8_000, 0.08, "hist"),
    ("gen2-plc-2", "gen2-hist", 8_000, 0.08, "hist"),
    ("tx-hmi", "tx-plc-1", 2_000, 0.05, "scada"),
    ("tx-hmi", "tx-plc-2", 2_000, 0.05, "scada"),
    ("tx-hmi", "tx-plc-3", 2_000, 0.05, "scada"),
    ("tx-gw", "cc-fw", 30_000, 0.08, "wan"),
    ("off-ws-1", "off-file", 15_000, 0.10, "smb"),
    ("off-ws-2", "off-file", 15_000, 0.10, "smb"),
    ("off-ws-3", "off-file", 15_000, 0.10, "smb"),
    ("off-mail", "off-gw", 20_000, 0.10, "smtp"),
    ("off-gw", "cc-fw", 80_000, 0.08, "wan"),  # office uplink
    ("cc-scada-1", "gen1-plc-1", 2_000, 0.05, "scada"),
    ("cc-scada-1", "gen1-plc-2", 2_000, 0.05, "scada"),
    ("cc-scada-2", "gen2-plc-1", 2_000, 0.05, "scada"),
    ("cc-scada-2", "gen2-plc-2", 2_000, 0.05, "scada"),
    ("cc-scada-2", "tx-plc-1", 2_000, 0.05, "scada"),
    ("cc-hmi-1", "cc-scada-1", 12_000, 0.08, "gui"),
    ("cc-ws-1", "cc-hist", 10_000, 0.10, "sql"),
    ("gen1-hist", "cc-hist", 10_000, 0.08, "hist"),
    ("gen2-hist", "cc-hist", 10_000, 0.08, "hist"),
]

# Clean function-code sets, cycled one message per tick per pair. HMI pairs
# poll with read-class codes; control-centre SCADA pairs use setpoint-class
# codes. Code 99 never appears here and is the default abnormal injection.
_HMI_CODES = (1, 2, 3, 4)
_SCADA_CODES = (3, 4, 5, 6)

# 2026-01-05T00:00:00Z; a fixed default epoch keeps daily SITREP dates stable.
POWER_GRID_EPOCH_MS = 1_767_571_200_000

OFFICE_UPLINK = "off-gw->cc-fw"


def _power_grid(seed: int) -> SiteModel:
    links = tuple(LinkSpec(src, dst, rate) for src, dst, rate, _, _ in _POWER_GRID_LINKS)
    profile = {
        f"{src}->{dst}": TrafficProfile(mean_rate=rate, jitter=jitter, protocol=proto)
        for src, dst, rate, jitter, proto in _POWER_GRID_LINKS
    }
    control = {}
    for src, dst, _, _, proto in _POWER_GRID_LINKS:
        if proto != "scada":
            continue
        codes = _SCADA_CODES if src.startswith("cc-") else _HMI_CODES
        control[f"{src}->{dst}"] = codes
    model = SiteModel(
        site_id="power-grid",
        hosts=tuple(HostSpec(*h) for h in _POWER_GRID_HOSTS),
        links=links,
        aors=dict(POWER_GRID_AORS),
        traffic_profile=profile,
        control_profile=control,
        seed=seed,
        epoch_ms=POWER_GRID_EPOCH_MS,
    )
    model.validate()
    return model


TEMPLATES = {
    "power-grid": _power_grid,
}


def build_site(template, seed: int) -> SiteModel:
    """Build a SiteModel from a bundled template name or a config document.

    A config document is a mapping with the same structure as
    :meth:`SiteModel.to_dict` (hosts, links, aors, traffic_profile,
    control_profile, optional attack_schedule). Identical (template, seed)
    pairs always yield identical models.
    """
    if isinstance(template, str):
        builder = TEMPLATES.get(template)
        if builder is None:
            raise SiteValidationError(
                [f"unknown template {template!r}; bundled templates: {sorted(TEMPLATES)}"]
            )
        return builder(seed)
    if isinstance(template, dict):
        raw = dict(template)
        raw["seed"] = seed
        try:
            model = SiteModel.from_dict(raw)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SiteValidationError):
                raise
            raise SiteValidationError([f"malformed site config: {exc!r}"]) from exc
        model.validate()
        return model
    raise SiteValidationError(
        [f"template must be a name or a config mapping, got {type(template).__name__}"]
    )


def load_site_config(path: str | Path) -> dict:
    """Read a site config document (YAML or JSON) from disk."""
    text = Path(path).read_text(encoding="utf-8")
    loaded = yaml.safe_load(text)
    if not isinstance(loaded, dict):
        raise SiteValidationError([f"site config {path} must contain a mapping"])
    return loaded
