"""Platform configuration defaults and loading.

Every tunable the platform uses lives here so that operators can override any
of it from a YAML/JSON config file or OMR_* environment variables without code
changes. Precedence: CLI flags > environment > config file > these defaults.
"""

import copy
import json
import os
from pathlib import Path

import yaml

CONFIG_ENV_VAR = "OMR_CONFIG"
KEY_ENV_VAR = "OMR_SENSOR_KEY"
API_ENV_VAR = "OMR_API"

DEFAULT_CONFIG = {
    # Sensor pipeline policy. The anomaly detector is a rolling mean +/- k*sigma
    # over the preceding unflagged buckets; sigma_floor_frac keeps a zero-variance
    # baseline from flagging ordinary jitter.
    "sensor": {
        "bucket_width": 60,            # seconds per traffic bucket
        "anomaly": {
            "window": 60,              # baseline window, in buckets
            "k": 3.0,                  # flag when |bytes - mean| > k * sigma
            "min_baseline": 10,        # buckets required before flagging starts
            "sigma_floor_frac": 0.01,  # sigma floor as a fraction of the mean
        },
        "availability": {
            "down_after": 5,           # consecutive empty buckets before host-down
        },
        "control": {
            "min_learning_window": 3600,  # seconds; shorter windows are rejected
        },
        # Device-log codes that raise a device-log-alert. Operator-editable;
        # the clean simulator profile only emits "status-ok".
        "log_alert_codes": ["config-changed", "auth-failure", "rule-violation"],
    },
    # Fixed kind -> default severity map. host-down severity is upgraded to
    # critical when the host's role is "controller".
    "severity_map": {
        "volume-anomaly": "warning",
        "new-asset": "info",
        "host-down": "warning",
        "host-up": "info",
        "novel-control": "critical",
        "device-log-alert": "warning",
    },
    # Sensor uplink budget. rate_cap matches the satellite service class the
    # platform is sized for (492 kbit/s); burst bounds a single frame payload.
    "uplink": {
        "rate_cap": 492_000,           # bits per second
        "burst": 8192,                 # max frame payload, bytes
        "shared_key_id": "sensor-shared-1",
    },
    # JOC engine policy.
    "joc": {
        "batch_interval_hours": 24,
        "batch_review_hours": 2,
        "correlation_window": 900,     # seconds
        "dispatch_cycle_ms": 1000,
    },
    # Management API.
    "api": {
        "host": "127.0.0.1",
        "port": 8787,
        "uplink_port": 8788,
    },
    # Persistence paths (created on demand).
    "store": {
        "root": "omr-data",
        "event_log": "events.log",
        "snapshot": "snapshot.json",
        "attachments": "attachments",
    },
    # Ceasefire terms the compliance ledger accepts. Scenario-specific and
    # operator-editable; these defaults cover the standard cooperation terms.
    "ceasefire_terms": {
        "term-1": "assist-dismantling-dos-sources",
        "term-2": "cooperate-on-cybercrime-prevention",
        "term-3": "declare-stolen-information",
        "term-4": "declare-compromised-systems",
        "term-5": "declare-infrastructure-vulnerabilities",
        "term-6": "assist-malware-removal",
        "term-7": "honour-site-monitoring-requests",
    },
    # Compliance trend policy: the range is split into halves and the
    # cooperative fraction compared; within +/- threshold counts as stable.
    "compliance": {
        "trend_threshold": 0.1,
    },
    # Ticket lifecycle table, keyed "state:action" -> next state. Data-driven
    # so a different lifecycle reading is a config change, not a code change.
    "ticket_lifecycle": {
        "draft:submit": "submitted",
        "submitted:acknowledge": "acknowledged",
        "acknowledged:start-analysis": "in-analysis",
        "in-analysis:escalate": "escalated",
        "in-analysis:resolve": "resolved",
        "escalated:resume-analysis": "in-analysis",
        "escalated:resolve": "resolved",
        "resolved:close": "closed",
        "closed:reopen": "in-analysis",
    },
}

# Environment overrides: OMR_<SECTION>__<KEY> (double underscore nesting),
# e.g. OMR_SENSOR__BUCKET_WIDTH=30. Values parsed as YAML scalars.
ENV_PREFIX = "OMR_"


class ConfigError(ValueError):
    """Raised for unreadable or malformed config files."""


def _deep_merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _env_overrides(environ: dict) -> dict:
    overrides: dict = {}
    reserved = {CONFIG_ENV_VAR, KEY_ENV_VAR, API_ENV_VAR}
    for name, raw in environ.items():
        if not name.startswith(ENV_PREFIX) or name in reserved:
            continue
        path = name[len(ENV_PREFIX):].lower().split("__")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            value = raw
        node = overrides
        for part in path[:-1]:
            node = node.setdefault(part, {})
        node[path[-1]] = value
    return overrides


def load_config(path: str | Path | None = None, environ: dict | None = None) -> dict:
    """Resolve the effective platform config.

    ``path`` may be omitted, in which case the OMR_CONFIG environment variable
    is consulted. Returns a deep copy; mutating it never touches the defaults.
    """
    environ = os.environ if environ is None else environ
    config = copy.deepcopy(DEFAULT_CONFIG)

    if path is None:
        path = environ.get(CONFIG_ENV_VAR)
    if path:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"config file not found: {file_path}")
        try:
            loaded = yaml.safe_load(file_path.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed config file {file_path}: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError(f"config file {file_path} must contain a mapping")
        config = _deep_merge(config, loaded)

    config = _deep_merge(config, _env_overrides(dict(environ)))
    return config


def dump_config(config: dict) -> str:
    """Canonical JSON rendering, used by `omr config show --format structured`."""
    return json.dumps(config, indent=2, sort_keys=True)
