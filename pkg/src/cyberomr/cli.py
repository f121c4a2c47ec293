"""omr: command-line entry point for the whole platform.

Offline subcommands (simulate, sensor, report, assess) run without a server.
Server-backed subcommands (aor, events, batch, ticket, sitrep, comply,
correlate, watch) talk to a running `omr serve` instance over the management
API; point them at it with --api or the OMR_API environment variable.

The sensor key is read from OMR_SENSOR_KEY or a key file, never from a flag.
"""

import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .config import API_ENV_VAR, ConfigError, dump_config, load_config
from .governance.assessment import (
    AssessmentValidationError,
    TechnicalAssessment,
    score_assessment,
)
from .joc.api import Platform, create_app
from .joc.engine import AoR, ManualClock, MonitoringMode, WallClock
from .joc.listener import UplinkListener, send_frames
from .joc.store import EventStore
from .reporting.figures import (
    render_event_summary_figure,
    render_volume_figure,
    write_events_jsonl,
    write_series_csv,
)
from .sensor.pipeline import run_site_pipelines
from .sensor.uplink import LinkBudget, Uplink, UplinkKeyError, load_uplink_key
from .sim.archive import read_archive
from .sim.engine import run as run_sim
from .sim.model import (
    AttackScenario,
    OverlappingTakedownError,
    SiteValidationError,
    UnknownTargetError,
    inject_attack,
)
from .sim.template import build_site, load_site_config

DEFAULT_API = "http://127.0.0.1:8787"


class Ctx:
    def __init__(self):
        self.config = None
        self.format = "human"
        self.api = DEFAULT_API


pass_ctx = click.make_pass_decorator(Ctx, ensure=True)


def emit(ctx: Ctx, data, human: str | None = None):
    if ctx.format == "structured":
        click.echo(json.dumps(data, sort_keys=True))
    else:
        click.echo(human if human is not None else json.dumps(data, indent=2, sort_keys=True))


def fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def api_request(ctx: Ctx, method: str, path: str, **kwargs):
    url = ctx.api.rstrip("/") + path
    try:
        response = httpx.request(method, url, timeout=30.0, **kwargs)
    except httpx.HTTPError as exc:
        fail(f"cannot reach management API at {ctx.api}: {exc}")
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        fail(f"{method} {path} -> {response.status_code}: {detail}")
    return response


def _load_model(template, seed, site_file):
    if site_file:
        return build_site(load_site_config(site_file), seed)
    return build_site(template, seed)


@click.group()
@click.version_option(version=__version__, prog_name="omr")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Platform config file (YAML/JSON); also via OMR_CONFIG.")
@click.option("--format", "output_format", type=click.Choice(["human", "structured"]),
              default="human", show_default=True, help="Output format.")
@click.option("--api", default=None, envvar=API_ENV_VAR,
              help=f"Management API base URL [default: {DEFAULT_API}].")
@pass_ctx
def main(ctx: Ctx, config_path, output_format, api):
    """Cyber observation, monitoring and reporting platform."""
    try:
        ctx.config = load_config(config_path)
    except ConfigError as exc:
        fail(str(exc))
    ctx.format = output_format
    ctx.api = api or DEFAULT_API


# ---------------------------------------------------------------- simulate

@main.command()
@click.option("--template", default="power-grid", show_default=True)
@click.option("--site", "site_file", type=click.Path(exists=True), default=None,
              help="Site config document instead of a bundled template.")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--duration", type=float, default=14400, show_default=True, help="Seconds.")
@click.option("--tick", type=float, default=1.0, show_default=True, help="Seconds.")
@click.option("--attacks", "attacks_file", type=click.Path(exists=True), default=None,
              help="YAML/JSON list of attack scenarios to inject.")
@click.option("--out", "out_path", type=click.Path(), default="archive.jsonl", show_default=True)
@pass_ctx
def simulate(ctx: Ctx, template, site_file, seed, duration, tick, attacks_file, out_path):
    """Generate a telemetry archive (plus ground-truth sidecar)."""
    try:
        model = _load_model(template, seed, site_file)
        if attacks_file:
            import yaml

            raw = yaml.safe_load(Path(attacks_file).read_text(encoding="utf-8")) or []
            for entry in raw:
                model = inject_attack(model, AttackScenario.from_dict(entry))
        archive = run_sim(model, duration, tick)
    except (SiteValidationError, UnknownTargetError, OverlappingTakedownError, ValueError, KeyError) as exc:
        fail(str(exc))
    archive.write(out_path)
    emit(
        ctx,
        {
            "archive": str(out_path),
            "annotations": str(out_path) + ".truth",
            "records": len(archive.records),
            "attacks": len(archive.annotations),
            "digest": archive.digest(),
        },
        human=(
            f"wrote {len(archive.records)} records to {out_path} "
            f"({len(archive.annotations)} attack annotations)\ndigest: {archive.digest()}"
        ),
    )


# ---------------------------------------------------------------- sensor

@main.command()
@click.option("--archive", "archive_path", required=True,
              help="Telemetry archive file, or '-' for a live stream on stdin.")
@click.option("--aor", "aor_id", required=True)
@click.option("--template", default="power-grid", show_default=True,
              help="Template naming the site map (host-to-AoR assignment).")
@click.option("--site", "site_file", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--out", "frames_out", type=click.Path(), default=None,
              help="Write uplink frames to this file.")
@click.option("--connect", default=None, metavar="HOST:PORT",
              help="Stream uplink frames over TCP.")
@click.option("--post", "post_api", is_flag=True,
              help="POST frames to the management API uplink endpoint.")
@click.option("--events-out", type=click.Path(), default=None,
              help="Also write detected events as JSON lines.")
@click.option("--key-file", type=click.Path(), default=None,
              help="Uplink key file; defaults to OMR_SENSOR_KEY.")
@pass_ctx
def sensor(ctx: Ctx, archive_path, aor_id, template, site_file, seed, frames_out,
           connect, post_api, events_out, key_file):
    """Run the passive sensor pipeline for one AoR over an archive."""
    try:
        model = _load_model(template, seed, site_file)
    except SiteValidationError as exc:
        fail(str(exc))
    if aor_id not in model.aors:
        fail(f"AoR {aor_id!r} not in site; known AoRs: {', '.join(sorted(model.aors))}")

    if archive_path == "-":
        from .sim.archive import archive_from_records
        from .sim.telemetry import record_from_line

        records = [
            record_from_line(line) for line in sys.stdin if line.strip()
        ]
        archive = archive_from_records(records, site_id=model.site_id)
    else:
        if not Path(archive_path).exists():
            fail(f"archive not found: {archive_path}")
        archive = read_archive(archive_path, site_id=model.site_id)
    results = run_site_pipelines(
        archive, model.host_aors(), model.roles(), ctx.config, aor_ids=[aor_id]
    )
    result = results[aor_id]

    if events_out:
        write_events_jsonl(result.events, events_out)

    frames = []
    if frames_out or connect or post_api:
        try:
            key = load_uplink_key(key_file)
        except UplinkKeyError as exc:
            fail(str(exc))
        uplink_cfg = ctx.config["uplink"]
        uplink = Uplink(
            key,
            LinkBudget(
                rate_cap=uplink_cfg["rate_cap"],
                burst=uplink_cfg["burst"],
                shared_key_id=uplink_cfg["shared_key_id"],
            ),
        )
        frames = uplink.transmit(result.events)
        if frames_out:
            with open(frames_out, "wb") as fh:
                for frame in frames:
                    fh.write(frame.to_bytes())
        if connect:
            host, _, port = connect.partition(":")
            send_frames(frames, host, int(port))
        if post_api:
            blob = b"".join(f.to_bytes() for f in frames)
            api_request(ctx, "POST", "/uplink/frames",
                        content=blob, headers={"content-type": "application/octet-stream"})

    emit(
        ctx,
        {
            "aor": aor_id,
            "learning_events": len(result.learning_events),
            "detection_events": len(result.events),
            "assets": len(result.asset_table.entries),
            "baseline_pairs": len(result.baseline.allowed),
            "frames": len(frames),
        },
        human=(
            f"{aor_id}: {len(result.events)} detection events "
            f"({len(result.learning_events)} learning registrations, "
            f"{len(result.asset_table.entries)} assets, {len(frames)} frames)"
        ),
    )


# ---------------------------------------------------------------- report

@main.command()
@click.option("--archive", "archive_path", type=click.Path(exists=True), required=True)
@click.option("--annotations", "annotations_path", type=click.Path(exists=True), default=None)
@click.option("--template", default="power-grid", show_default=True)
@click.option("--site", "site_file", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--aor", "only_aor", default=None, help="Limit the report to one AoR.")
@click.option("--out", "out_dir", type=click.Path(), default="omr-report", show_default=True)
@pass_ctx
def report(ctx: Ctx, archive_path, annotations_path, template, site_file, seed, only_aor, out_dir):
    """Offline detection report: delimited outputs plus rendered figures."""
    try:
        model = _load_model(template, seed, site_file)
    except SiteValidationError as exc:
        fail(str(exc))
    archive = read_archive(archive_path, annotations_path, site_id=model.site_id)
    aor_ids = [only_aor] if only_aor else sorted(model.aors)
    for aor_id in aor_ids:
        if aor_id not in model.aors:
            fail(f"AoR {aor_id!r} not in site; known AoRs: {', '.join(sorted(model.aors))}")

    results = run_site_pipelines(
        archive, model.host_aors(), model.roles(), ctx.config, aor_ids=aor_ids
    )
    out = Path(out_dir)
    all_events = []
    written = []
    for aor_id, result in sorted(results.items()):
        all_events.extend(result.events)
        written.append(str(write_series_csv(result.series, out / f"series-{aor_id}.csv")))
        written.append(
            str(
                render_volume_figure(
                    result.series,
                    result.events,
                    archive.annotations,
                    out / f"volume-{aor_id}.png",
                    title=f"Traffic volume: {aor_id}",
                    learn_end_ms=result.learn_end_ms,
                )
            )
        )
    all_events.sort(key=lambda e: e.event_id)
    written.append(str(write_events_jsonl(all_events, out / "events.jsonl")))
    written.append(str(render_event_summary_figure(all_events, out / "event-summary.png")))
    emit(
        ctx,
        {"out_dir": str(out), "events": len(all_events), "files": written},
        human=f"report in {out}: {len(all_events)} events\n" + "\n".join(f"  {w}" for w in written),
    )


# ---------------------------------------------------------------- serve

@main.command()
@click.option("--host", default=None, help="API bind host.")
@click.option("--port", type=int, default=None, help="API bind port.")
@click.option("--uplink-port", type=int, default=None, help="TCP uplink listener port.")
@click.option("--key-file", type=click.Path(), default=None)
@click.option("--clock", "clock_kind", type=click.Choice(["wall", "manual"]), default="wall",
              show_default=True, help="manual: clock driven by replayed event timestamps.")
@click.option("--bootstrap", "bootstrap_template", default=None,
              help="Register the AoRs of a bundled site template at startup.")
@click.option("--store-dir", type=click.Path(), default=None,
              help="Persistence directory (event log + snapshots).")
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="Serve dashboard static assets from this directory at /ui.")
@pass_ctx
def serve(ctx: Ctx, host, port, uplink_port, key_file, clock_kind, bootstrap_template,
          store_dir, ui_dir):
    """Start the JOC engine with its management API and uplink listener."""
    import uvicorn

    config = ctx.config
    host = host or config["api"]["host"]
    port = port if port is not None else config["api"]["port"]
    uplink_port = uplink_port if uplink_port is not None else config["api"]["uplink_port"]

    store = None
    if store_dir:
        store = EventStore(Path(store_dir) / config["store"]["event_log"])
    clock = ManualClock() if clock_kind == "manual" else WallClock()
    platform = Platform(config, clock=clock, store=store, store_dir=store_dir)

    if bootstrap_template:
        for aor in bootstrap_aors(bootstrap_template, config):
            platform.engine.register_aor(aor)
            click.echo(f"registered AoR {aor.aor_id} ({aor.mode.kind})")

    app = create_app(platform, ui_dir=ui_dir)

    key = None
    try:
        key = load_uplink_key(key_file)
    except UplinkKeyError:
        click.echo("no uplink key configured; uplink ingestion disabled", err=True)
    listener = None
    if key:
        app.state.uplink_key = key
        listener = UplinkListener(platform, key, host, uplink_port)
        listener.start()
        click.echo(f"uplink listener on {host}:{listener.address[1]}")

    click.echo(f"management API on http://{host}:{port}")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        if listener:
            listener.stop()
        if store_dir:
            snapshot = Path(store_dir) / config["store"]["snapshot"]
            platform.engine.store.write_snapshot(snapshot)
            click.echo(f"snapshot written to {snapshot}")


def bootstrap_aors(template: str, config: dict) -> list[AoR]:
    """AoRs for a bundled template with their assessed monitoring modes.

    Generation AoRs run real-time (loss of generation threatens civilians);
    the rest default to batch review.
    """
    model = build_site(template, 0)
    joc_cfg = config["joc"]
    batch = MonitoringMode.batch(joc_cfg["batch_interval_hours"], joc_cfg["batch_review_hours"])
    aors = []
    for aor_id, label in sorted(model.aors.items()):
        mode = MonitoringMode.real_time() if aor_id.startswith("generation") else batch
        aors.append(
            AoR(
                aor_id=aor_id,
                site_id=model.site_id,
                label=label,
                mode=mode,
                region_tag=model.site_id,
            )
        )
    return aors


# ---------------------------------------------------------------- aor

@main.group()
def aor():
    """Register and inspect AoRs."""


@aor.command("register")
@click.option("--id", "aor_id", required=True)
@click.option("--site", default="", help="Site the AoR belongs to.")
@click.option("--label", default="")
@click.option("--mode", type=click.Choice(["real-time", "batch"]), default="batch", show_default=True)
@click.option("--interval", type=float, default=24.0, show_default=True, help="Batch interval, hours.")
@click.option("--review", type=float, default=2.0, show_default=True, help="Batch review window, hours.")
@click.option("--region", default="", help="Region tag shared with non-cyber units.")
@pass_ctx
def aor_register(ctx: Ctx, aor_id, site, label, mode, interval, review, region):
    body = {
        "aor_id": aor_id,
        "site_id": site,
        "label": label,
        "mode": {"kind": mode, "interval_hours": interval, "review_hours": review},
        "region_tag": region,
    }
    data = api_request(ctx, "POST", "/aors", json=body).json()
    emit(ctx, data, human=f"registered {data['aor_id']} ({data['mode']['kind']})")


@aor.command("list")
@pass_ctx
def aor_list(ctx: Ctx):
    data = api_request(ctx, "GET", "/aors").json()
    lines = [
        f"{a['aor_id']:<16} {a['mode']['kind']:<10} {a.get('label', '')}"
        for a in data["aors"]
    ]
    emit(ctx, data, human="\n".join(lines) if lines else "(no AoRs registered)")


# ---------------------------------------------------------------- events

@main.command()
@click.option("--aor", "aor_id", default=None)
@click.option("--kind", default=None)
@click.option("--severity", default=None)
@click.option("--since", type=int, default=None, help="UTC ms lower bound.")
@click.option("--until", type=int, default=None, help="UTC ms upper bound (exclusive).")
@click.option("--limit", type=int, default=50, show_default=True)
@click.option("--integrity", "show_integrity", is_flag=True, help="Show integrity warnings instead.")
@click.option("--dead-letter", "show_dead", is_flag=True, help="Show dead-lettered events instead.")
@pass_ctx
def events(ctx: Ctx, aor_id, kind, severity, since, until, limit, show_integrity, show_dead):
    """List persisted events (or integrity/dead-letter streams)."""
    if show_integrity:
        data = api_request(ctx, "GET", "/integrity").json()
        emit(ctx, data, human="\n".join(w["detail"] for w in data["warnings"]) or "(no warnings)")
        return
    if show_dead:
        data = api_request(ctx, "GET", "/dead-letter").json()
        emit(ctx, data, human=f"{len(data['entries'])} dead-lettered events")
        return
    params = {
        k: v
        for k, v in {
            "aor": aor_id, "kind": kind, "severity": severity,
            "since": since, "until": until, "limit": limit,
        }.items()
        if v is not None
    }
    data = api_request(ctx, "GET", "/events", params=params).json()
    lines = [
        f"{e['event_id']}  {e['ts']}  {e['aor_id']:<16} {e['kind']:<16} {e['severity']}"
        for e in data["events"]
    ]
    emit(ctx, data, human="\n".join(lines) if lines else "(no events)")


# ---------------------------------------------------------------- watch

@main.command()
@click.option("--count", type=int, default=None, help="Exit after N events.")
@click.option("--timeout", type=float, default=30.0, show_default=True,
              help="Exit after this many idle seconds.")
@pass_ctx
def watch(ctx: Ctx, count, timeout):
    """Subscribe to the live alert stream and print events as they arrive."""
    params = {"timeout": timeout}
    if count is not None:
        params["max_events"] = count
    url = ctx.api.rstrip("/") + "/events/stream"
    seen = 0
    try:
        with httpx.stream("GET", url, params=params, timeout=timeout + 10) as response:
            if response.status_code >= 400:
                fail(f"stream rejected: {response.status_code}")
            for line in response.iter_lines():
                if not line.startswith("data: "):
                    continue
                payload = line[len("data: "):]
                seen += 1
                if ctx.format == "structured":
                    click.echo(payload)
                else:
                    event = json.loads(payload)
                    click.echo(
                        f"[{event['severity'].upper():<8}] {event['ts']} "
                        f"{event['aor_id']} {event['kind']} {event['event_id']}"
                    )
    except httpx.HTTPError as exc:
        fail(f"stream error: {exc}")
    if ctx.format == "human":
        click.echo(f"stream closed after {seen} events")


# ---------------------------------------------------------------- batch

@main.group()
def batch():
    """Review-batch lifecycle."""


@batch.command("list")
@click.option("--aor", "aor_id", default=None)
@pass_ctx
def batch_list(ctx: Ctx, aor_id):
    params = {"aor": aor_id} if aor_id else {}
    data = api_request(ctx, "GET", "/batches", params=params).json()
    lines = [
        f"{b['batch_id']:<28} {b['state']:<13} events={len(b['event_ids'])} "
        f"window=[{b['window_start']},{b['window_end']})"
        for b in data["batches"]
    ]
    emit(ctx, data, human="\n".join(lines) if lines else "(no batches)")


@batch.command("show")
@click.argument("batch_id")
@pass_ctx
def batch_show(ctx: Ctx, batch_id):
    data = api_request(ctx, "GET", f"/batches/{batch_id}").json()
    emit(ctx, data)


@batch.command("close")
@click.option("--aor", "aor_id", required=True)
@click.option("--now", type=int, default=None, help="Close time, UTC ms (defaults to engine clock).")
@pass_ctx
def batch_close(ctx: Ctx, aor_id, now):
    body = {"now": now} if now is not None else {}
    data = api_request(ctx, "POST", f"/aors/{aor_id}/close-batch", json=body).json()
    emit(ctx, data, human=f"{data['batch_id']} now {data['state']} ({len(data['event_ids'])} events)")


@batch.command("sign-off")
@click.argument("batch_id")
@click.option("--analyst", required=True)
@pass_ctx
def batch_sign_off(ctx: Ctx, batch_id, analyst):
    data = api_request(
        ctx, "POST", f"/batches/{batch_id}/sign-off", json={"analyst_id": analyst}
    ).json()
    emit(
        ctx,
        data,
        human=f"{data['batch_id']} state={data['state']} signatures={[s[0] for s in data['signatures']]}",
    )


# ---------------------------------------------------------------- ticket

@main.group()
def ticket():
    """SINCREP ticket lifecycle."""


@ticket.command("create")
@click.option("--analyst", required=True)
@click.option("--from-event", "source_event_id", default=None,
              help="Populate fields from a persisted sensor event.")
@click.option("--start-time", type=int, default=None, help="Start of event, UTC ms.")
@click.option("--event-type", default=None)
@click.option("--aor", "aor_id", default=None)
@click.option("--sensor", "detecting_sensor", default=None)
@click.option("--evidence", multiple=True, help="Evidence item (repeatable).")
@click.option("--attach", "attach_files", multiple=True, type=click.Path(exists=True),
              help="File stored content-addressed as evidence (repeatable).")
@click.option("--note", default="")
@pass_ctx
def ticket_create(ctx: Ctx, analyst, source_event_id, start_time, event_type, aor_id,
                  detecting_sensor, evidence, attach_files, note):
    fields = {}
    if start_time is not None:
        fields["start_time_of_event"] = start_time
    if event_type:
        fields["event_type"] = event_type
    if aor_id:
        fields["aor_id"] = aor_id
    if detecting_sensor:
        fields["detecting_sensor"] = detecting_sensor
    if evidence:
        fields["supporting_evidence"] = list(evidence)
    body = {"fields": fields, "analyst_id": analyst, "note": note}
    if source_event_id:
        body["source_event_id"] = source_event_id
    if attach_files:
        import base64

        body["attachments"] = [
            {
                "filename": Path(path).name,
                "data_base64": base64.b64encode(Path(path).read_bytes()).decode("ascii"),
            }
            for path in attach_files
        ]
    data = api_request(ctx, "POST", "/tickets", json=body).json()
    emit(ctx, data, human=f"created {data['ticket_id']} state={data['state']}")


@ticket.command("transition")
@click.option("--id", "ticket_id", required=True)
@click.option("--action", required=True)
@click.option("--analyst", required=True)
@click.option("--note", default="")
@pass_ctx
def ticket_transition(ctx: Ctx, ticket_id, action, analyst, note):
    data = api_request(
        ctx,
        "POST",
        f"/tickets/{ticket_id}/transition",
        json={"action": action, "analyst_id": analyst, "note": note},
    ).json()
    emit(ctx, data, human=f"{data['ticket_id']} -> {data['state']}")


@ticket.command("show")
@click.option("--id", "ticket_id", required=True)
@pass_ctx
def ticket_show(ctx: Ctx, ticket_id):
    data = api_request(ctx, "GET", f"/tickets/{ticket_id}").json()
    emit(ctx, data)


@ticket.command("list")
@click.option("--aor", "aor_id", default=None)
@click.option("--state", default=None)
@pass_ctx
def ticket_list(ctx: Ctx, aor_id, state):
    params = {k: v for k, v in {"aor": aor_id, "state": state}.items() if v}
    data = api_request(ctx, "GET", "/tickets", params=params).json()
    lines = [
        f"{t['ticket_id']}  {t['state']:<13} {t['aor_id']:<16} {t['event_type']}"
        for t in data["tickets"]
    ]
    emit(ctx, data, human="\n".join(lines) if lines else "(no tickets)")


@ticket.command("export")
@click.option("--id", "ticket_id", required=True)
@click.option("--export-format", "export_fmt", type=click.Choice(["structured-data", "plain-text"]),
              default="plain-text", show_default=True)
@pass_ctx
def ticket_export(ctx: Ctx, ticket_id, export_fmt):
    response = api_request(
        ctx, "GET", f"/tickets/{ticket_id}/export", params={"format": export_fmt}
    )
    click.echo(response.text, nl=False)


@ticket.command("attachment")
@click.option("--digest", required=True, help="Content digest cited in the ticket evidence.")
@click.option("--out", "out_path", type=click.Path(), required=True)
@pass_ctx
def ticket_attachment(ctx: Ctx, digest, out_path):
    """Fetch an evidence attachment blob by its content digest."""
    response = api_request(ctx, "GET", f"/attachments/{digest}")
    Path(out_path).write_bytes(response.content)
    emit(ctx, {"digest": digest, "out": out_path, "bytes": len(response.content)},
         human=f"wrote {len(response.content)} bytes to {out_path}")


# ---------------------------------------------------------------- sitrep

@main.command()
@click.option("--aor", "aor_id", required=True)
@click.option("--date", "report_date", required=True, help="UTC day, YYYY-MM-DD.")
@click.option("--export-format", "export_fmt", type=click.Choice(["structured-data", "plain-text"]),
              default=None, help="Defaults to the global --format choice.")
@pass_ctx
def sitrep(ctx: Ctx, aor_id, report_date, export_fmt):
    """Fetch (generating if needed) the daily SITREP for an AoR."""
    if export_fmt is None:
        export_fmt = "structured-data" if ctx.format == "structured" else "plain-text"
    response = api_request(
        ctx, "GET", f"/sitreps/{aor_id}/{report_date}", params={"format": export_fmt}
    )
    if export_fmt == "plain-text":
        click.echo(response.text, nl=False)
    else:
        emit(ctx, response.json())


# ---------------------------------------------------------------- assess

@main.command()
@click.option("--site", default="", help="Site the assessment is for.")
@click.option("--peace", type=int, required=True, help="Contribution to peace, 0-3.")
@click.option("--support", type=int, required=True, help="Local support, 0-3.")
@click.option("--capacity", type=int, required=True, help="Capacity to act, 0-3.")
@click.option("--risk/--no-risk", "civilian_harm_risk", default=False,
              help="Civilian harm / destabilisation risk at the site.")
@click.option("--justification", default="", help="Required for any score of 0 or 3.")
@click.option("--remote", is_flag=True, help="Submit through the management API.")
@pass_ctx
def assess(ctx: Ctx, site, peace, support, capacity, civilian_harm_risk, justification, remote):
    """Score a technical assessment into a monitoring recommendation."""
    body = {
        "site_id": site,
        "peace_contribution": peace,
        "local_support": support,
        "capacity": capacity,
        "civilian_harm_risk": civilian_harm_risk,
        "justification": justification,
    }
    if remote:
        data = api_request(ctx, "POST", "/assessments", json=body).json()
        emit(ctx, data, human=data["recommendation"]["label"])
        return
    try:
        assessment = TechnicalAssessment(**{
            "site_id": site,
            "peace_contribution": peace,
            "local_support": support,
            "capacity": capacity,
            "civilian_harm_risk": civilian_harm_risk,
            "justification": justification,
        })
        recommendation = score_assessment(assessment)
    except AssessmentValidationError as exc:
        fail(str(exc))
    emit(
        ctx,
        {"assessment": assessment.to_dict(), "recommendation": recommendation.to_dict()},
        human=str(recommendation),
    )


# ---------------------------------------------------------------- comply

@main.group()
def comply():
    """Ceasefire cooperation-compliance ledger."""


@comply.command("record")
@click.option("--party", required=True)
@click.option("--term", "term_id", required=True)
@click.option("--level", "cooperation_level",
              type=click.Choice(["cooperative", "partial", "uncooperative"]), required=True)
@click.option("--ts", type=int, default=None, help="Observation time, UTC ms.")
@click.option("--note", default="")
@click.option("--analyst", required=True)
@pass_ctx
def comply_record(ctx: Ctx, party, term_id, cooperation_level, ts, note, analyst):
    body = {
        "party": party,
        "term_id": term_id,
        "cooperation_level": cooperation_level,
        "note": note,
        "analyst_id": analyst,
    }
    if ts is not None:
        body["ts"] = ts
    data = api_request(ctx, "POST", "/compliance", json=body).json()
    emit(
        ctx,
        data,
        human=f"recorded {data['observation']['obs_id']} (ledger position {data['ledger_position']})",
    )


@comply.command("summary")
@click.option("--party", required=True)
@click.option("--term", "term_id", required=True)
@click.option("--start", type=int, required=True, help="Range start, UTC ms.")
@click.option("--end", type=int, required=True, help="Range end, UTC ms (exclusive).")
@pass_ctx
def comply_summary(ctx: Ctx, party, term_id, start, end):
    data = api_request(
        ctx,
        "GET",
        "/compliance/summary",
        params={"party": party, "term_id": term_id, "start": start, "end": end},
    ).json()
    counts = data["counts"]
    emit(
        ctx,
        data,
        human=(
            f"{party} / {term_id}: cooperative={counts['cooperative']} "
            f"partial={counts['partial']} uncooperative={counts['uncooperative']} "
            f"-> {data['direction']}"
        ),
    )


# ---------------------------------------------------------------- correlate

@main.group()
def correlate():
    """Cross-unit report correlation."""


@correlate.command("submit")
@click.option("--id", "report_id", required=True)
@click.option("--unit", "unit_type", type=click.Choice(["cyber", "police", "military", "civilian"]),
              required=True)
@click.option("--region", "region_tag", required=True)
@click.option("--start", "start_ms", type=int, required=True)
@click.option("--end", "end_ms", type=int, default=None, help="Defaults to start (point report).")
@click.option("--summary", default="")
@pass_ctx
def correlate_submit(ctx: Ctx, report_id, unit_type, region_tag, start_ms, end_ms, summary):
    body = {
        "report_id": report_id,
        "unit_type": unit_type,
        "region_tag": region_tag,
        "start_ms": start_ms,
        "end_ms": end_ms if end_ms is not None else start_ms,
        "summary": summary,
    }
    data = api_request(ctx, "POST", "/unit-reports", json=body).json()
    emit(ctx, data, human=f"submitted {data['report_id']} ({data['unit_type']})")


@correlate.command("groups")
@click.option("--window", type=float, default=None, help="Correlation window, seconds.")
@pass_ctx
def correlate_groups(ctx: Ctx, window):
    params = {"window": window} if window is not None else {}
    data = api_request(ctx, "GET", "/correlations", params=params).json()
    lines = [f"{g['group_id']}: {g['summary']}" for g in data["groups"]]
    emit(ctx, data, human="\n".join(lines) if lines else "(no correlation groups)")


# ---------------------------------------------------------------- config

@main.command("config")
@pass_ctx
def config_show(ctx: Ctx):
    """Print the effective platform configuration."""
    click.echo(dump_config(ctx.config))


def resolve_cli_path(path: str) -> bool:
    """True when a space-separated command path exists in the CLI tree.

    Extra tokens after the command (e.g. flag hints in the capability
    manifest) are accepted once a leaf command is reached.
    """
    node = main
    for token in path.split():
        if token.startswith("--"):
            continue
        if not isinstance(node, click.Group):
            return False
        node = node.commands.get(token)
        if node is None:
            return False
    return node is not main


if __name__ == "__main__":
    main()
