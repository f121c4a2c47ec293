"""Figure rendering for the report path.

Figures are written to files next to the delimited outputs; nothing here
opens a display. The volume figure is the analyst's first look at an AoR:
bytes per bucket over time, flagged buckets marked, attack intervals shaded
when ground truth is available (simulation runs only).
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

SEVERITY_COLORS = {"info": "#4c78a8", "warning": "#f58518", "critical": "#d62728"}


def _hours(ts_ms: int, origin_ms: int) -> float:
    return (ts_ms - origin_ms) / 3_600_000


def render_volume_figure(
    series,
    events=(),
    annotations=(),
    path: str | Path = "volume.png",
    title: str | None = None,
    learn_end_ms: int | None = None,
) -> Path:
    """Plot one AoR's traffic series with anomalies and attack intervals."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(9, 4))
    if series.buckets:
        origin = series.buckets[0].bucket_start
        xs = [_hours(b.bucket_start, origin) for b in series.buckets]
        ys = [b.bytes for b in series.buckets]
        ax.plot(xs, ys, lw=0.9, color="#4c78a8", label="bytes/bucket")

        flagged = [e for e in events if e.kind == "volume-anomaly"]
        if flagged:
            fx = [_hours(e.detail["bucket_start"], origin) for e in flagged]
            fy = [e.detail["bytes"] for e in flagged]
            ax.scatter(fx, fy, color="#d62728", zorder=3, s=18, label="flagged bucket")

        for ann in annotations:
            ax.axvspan(
                _hours(ann.start_ms, origin),
                _hours(ann.end_ms, origin),
                color="#d62728",
                alpha=0.12,
            )
        if learn_end_ms is not None and learn_end_ms > origin:
            ax.axvspan(0, _hours(learn_end_ms, origin), color="#888888", alpha=0.10)
            ax.axvline(_hours(learn_end_ms, origin), color="#888888", ls="--", lw=0.8)
    else:
        ax.text(0.5, 0.5, "no traffic observed", ha="center", va="center", transform=ax.transAxes)

    ax.set_xlabel("hours since first bucket")
    ax.set_ylabel("bytes per bucket")
    ax.set_title(title or f"Traffic volume: {series.aor_id}")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_event_summary_figure(events, path: str | Path = "events.png", title: str = "Events by kind") -> Path:
    """Bar chart of event counts by kind, colored by dominant severity."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    counts: dict[str, int] = {}
    severities: dict[str, str] = {}
    rank = {"info": 0, "warning": 1, "critical": 2}
    for event in events:
        counts[event.kind] = counts.get(event.kind, 0) + 1
        if rank.get(event.severity, 0) >= rank.get(severities.get(event.kind, "info"), 0):
            severities[event.kind] = event.severity

    fig, ax = plt.subplots(figsize=(7, 3.5))
    if counts:
        kinds = sorted(counts)
        values = [counts[k] for k in kinds]
        colors = [SEVERITY_COLORS.get(severities.get(k, "info"), "#4c78a8") for k in kinds]
        ax.bar(kinds, values, color=colors)
        ax.set_ylabel("events")
        ax.tick_params(axis="x", rotation=20)
    else:
        ax.text(0.5, 0.5, "no events", ha="center", va="center", transform=ax.transAxes)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_series_csv(series, path: str | Path) -> Path:
    """Delimited form of a traffic series, one row per bucket."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["aor_id", "bucket_start_ms", "bytes", "packets", "flow_count"])
        for bucket in series.buckets:
            writer.writerow(
                [series.aor_id, bucket.bucket_start, bucket.bytes, bucket.packets, bucket.flow_count]
            )
    return path


def write_events_jsonl(events, path: str | Path) -> Path:
    """Delimited event output, one serialized event per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for event in events:
            fh.write(event.to_json())
            fh.write("\n")
    return path
