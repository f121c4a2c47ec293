"""Offline CLI subcommands: simulate, sensor, report, assess, config."""

import json
from pathlib import Path

import yaml
from click.testing import CliRunner

from cyberomr.cli import main as cli_main
from cyberomr.config import KEY_ENV_VAR


def run_cli(*args, env=None, expect_exit=0):
    runner = CliRunner()
    result = runner.invoke(cli_main, list(args), env=env)
    assert result.exit_code == expect_exit, result.output
    return result


class TestSimulateCli:
    def test_same_invocation_twice_gives_identical_digests(self, tmp_path):
        digests = []
        for name in ("a.jsonl", "b.jsonl"):
            out = tmp_path / name
            result = run_cli(
                "--format", "structured", "simulate",
                "--template", "power-grid", "--seed", "42",
                "--duration", "300", "--out", str(out),
            )
            digests.append(json.loads(result.output)["digest"])
            assert out.exists()
            assert Path(str(out) + ".truth").exists()
        assert digests[0] == digests[1]

    def test_attacks_file_injection(self, tmp_path):
        attacks = tmp_path / "attacks.yaml"
        attacks.write_text(
            yaml.safe_dump(
                [{"kind": "rogue-asset", "target": "off-file", "start": 60, "duration": 60}]
            ),
            encoding="utf-8",
        )
        out = tmp_path / "run.jsonl"
        result = run_cli(
            "--format", "structured", "simulate", "--duration", "180",
            "--attacks", str(attacks), "--out", str(out),
        )
        assert json.loads(result.output)["attacks"] == 1

    def test_bad_attack_target_exits_nonzero(self, tmp_path):
        attacks = tmp_path / "attacks.yaml"
        attacks.write_text(
            yaml.safe_dump(
                [{"kind": "host-takedown", "target": "ghost", "start": 0, "duration": 60}]
            ),
            encoding="utf-8",
        )
        result = run_cli(
            "simulate", "--duration", "60", "--attacks", str(attacks),
            "--out", str(tmp_path / "x.jsonl"), expect_exit=1,
        )
        assert "ghost" in result.output

    def test_unknown_subcommand_exits_2(self):
        run_cli("simulato", expect_exit=2)


class TestSensorCli:
    def test_sensor_writes_events_and_frames(self, tmp_path):
        archive = tmp_path / "run.jsonl"
        run_cli("simulate", "--duration", "4200", "--out", str(archive))
        frames_out = tmp_path / "frames.bin"
        events_out = tmp_path / "events.jsonl"
        result = run_cli(
            "--format", "structured", "sensor",
            "--archive", str(archive), "--aor", "office",
            "--out", str(frames_out), "--events-out", str(events_out),
            env={KEY_ENV_VAR: "cli-test-key"},
        )
        payload = json.loads(result.output)
        assert payload["aor"] == "office"
        assert payload["assets"] > 0
        assert events_out.exists()

    def test_sensor_without_key_fails_when_uplink_requested(self, tmp_path):
        archive = tmp_path / "run.jsonl"
        run_cli("simulate", "--duration", "3700", "--out", str(archive))
        result = run_cli(
            "sensor", "--archive", str(archive), "--aor", "office",
            "--out", str(tmp_path / "frames.bin"),
            env={KEY_ENV_VAR: ""}, expect_exit=1,
        )
        assert "key" in result.output.lower()

    def test_unknown_aor_rejected(self, tmp_path):
        archive = tmp_path / "run.jsonl"
        run_cli("simulate", "--duration", "3700", "--out", str(archive))
        result = run_cli(
            "sensor", "--archive", str(archive), "--aor", "atlantis", expect_exit=1
        )
        assert "atlantis" in result.output

    def test_sensor_reads_live_stream_from_stdin(self, tmp_path):
        archive = tmp_path / "run.jsonl"
        run_cli("simulate", "--duration", "4000", "--out", str(archive))
        runner = CliRunner()
        result = runner.invoke(
            cli_main,
            ["--format", "structured", "sensor", "--archive", "-", "--aor", "office"],
            input=archive.read_text(encoding="utf-8"),
        )
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert payload["assets"] > 0


class TestReportCli:
    def test_report_renders_figures_next_to_delimited_output(self, tmp_path):
        archive = tmp_path / "run.jsonl"
        attacks = tmp_path / "attacks.yaml"
        attacks.write_text(
            yaml.safe_dump(
                [{"kind": "traffic-surge", "target": "off-gw->cc-fw",
                  "start": 4200, "duration": 300, "magnitude": 10}]
            ),
            encoding="utf-8",
        )
        run_cli("simulate", "--duration", "6000", "--attacks", str(attacks),
                "--out", str(archive))
        out_dir = tmp_path / "report"
        result = run_cli(
            "--format", "structured", "report",
            "--archive", str(archive), "--aor", "office", "--out", str(out_dir),
        )
        payload = json.loads(result.output)
        assert payload["events"] >= 1
        volume_png = out_dir / "volume-office.png"
        series_csv = out_dir / "series-office.csv"
        events_jsonl = out_dir / "events.jsonl"
        summary_png = out_dir / "event-summary.png"
        for artifact in (volume_png, series_csv, events_jsonl, summary_png):
            assert artifact.exists(), artifact
        assert volume_png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        header = series_csv.read_text(encoding="utf-8").splitlines()[0]
        assert header == "aor_id,bucket_start_ms,bytes,packets,flow_count"
        first_event = json.loads(events_jsonl.read_text(encoding="utf-8").splitlines()[0])
        assert first_event["kind"] == "volume-anomaly"


class TestAssessCli:
    def test_zero_peace_contribution_prints_deny(self):
        result = run_cli(
            "assess", "--peace", "0", "--support", "2", "--capacity", "2",
            "--justification", "no peace value",
        )
        assert result.output.strip() == "Deny"

    def test_risk_selects_real_time(self):
        result = run_cli("assess", "--peace", "2", "--support", "2", "--capacity", "2", "--risk")
        assert "real-time" in result.output

    def test_no_risk_selects_batch_24h(self):
        result = run_cli("assess", "--peace", "2", "--support", "2", "--capacity", "2")
        assert "batch every 24h" in result.output

    def test_structured_output_round_trips(self):
        result = run_cli(
            "--format", "structured", "assess",
            "--peace", "3", "--support", "1", "--capacity", "1",
            "--risk", "--justification", "dam control network",
        )
        payload = json.loads(result.output)
        assert payload["recommendation"]["decision"] == "monitor"
        assert payload["recommendation"]["mode"]["kind"] == "real-time"

    def test_out_of_range_exits_1(self):
        result = run_cli("assess", "--peace", "9", "--support", "2", "--capacity", "2",
                         expect_exit=1)
        assert "0..3" in result.output


class TestConfigCli:
    def test_config_show_is_valid_json_with_defaults(self):
        result = run_cli("config")
        payload = json.loads(result.output)
        assert payload["uplink"]["rate_cap"] == 492_000
        assert len(payload["ceasefire_terms"]) == 7

    def test_config_file_and_env_precedence(self, tmp_path):
        config_file = tmp_path / "omr.yaml"
        config_file.write_text(
            yaml.safe_dump({"sensor": {"bucket_width": 30}}), encoding="utf-8"
        )
        result = run_cli("--config", str(config_file), "config")
        assert json.loads(result.output)["sensor"]["bucket_width"] == 30
        result = run_cli(
            "--config", str(config_file), "config",
            env={"OMR_SENSOR__BUCKET_WIDTH": "15"},
        )
        assert json.loads(result.output)["sensor"]["bucket_width"] == 15
