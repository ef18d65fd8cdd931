import json
import time

import pytest

from helpers import ServiceHandle
from podiumtimer.cli import (
    build_config,
    key_action,
    main,
    parse_jitter,
    parse_time_arg,
)
from podiumtimer.errors import InvalidConfig
from podiumtimer.hapticsim import JitterKind
from podiumtimer.timer import TimerPhase


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def json_lines(out):
    return [json.loads(line) for line in out.splitlines() if line.strip()]


class TestParsing:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [("3:00", 180), ("1:30", 90), ("0:10", 10), ("90", 90), ("0", 0), ("10:05", 605)],
    )
    def test_time_forms(self, text, expected):
        assert parse_time_arg(text) == expected

    @pytest.mark.parametrize("text", ["", "1:60", "-5", "1:-1", "abc", "1:2:3"])
    def test_bad_times(self, text):
        with pytest.raises(ValueError):
            parse_time_arg(text)

    def test_build_config_explicit(self):
        config = build_config("3:00", "1:30,0:30,0:10", 3)
        assert config.duration_s == 180
        assert [a.offset_before_end_s for a in config.alerts] == [90, 30, 10]
        assert config.alerts[-1].haptic_intensity.value == "prominent"

    def test_build_config_defaults(self):
        config = build_config("3:00", None, 3)
        assert [a.offset_before_end_s for a in config.alerts] == [90, 30, 10]

    def test_build_config_off_grid(self):
        with pytest.raises(InvalidConfig) as exc:
            build_config("3:00", "0:33", 3)
        assert "OffGrid" in str(exc.value)

    def test_build_config_out_of_range(self):
        with pytest.raises(InvalidConfig) as exc:
            build_config("3:00", "4:00", 3)
        assert "OutOfRange" in str(exc.value)

    def test_jitter_specs(self):
        assert parse_jitter("none", 0).kind is JitterKind.NONE
        uniform = parse_jitter("uniform:1.5", 7)
        assert (uniform.kind, uniform.max_delay_s, uniform.seed) == (JitterKind.UNIFORM, 1.5, 7)
        gaussian = parse_jitter("gaussian:0.3,0.1", 7)
        assert (gaussian.mean_s, gaussian.std_s) == (0.3, 0.1)
        with pytest.raises(ValueError):
            parse_jitter("lumpy:1", 0)
        with pytest.raises(ValueError):
            parse_jitter("uniform:fast", 0)


class TestRun:
    def test_reference_session_transcript(self, capsys):
        started = time.monotonic()
        code, out, err = run_cli(
            ["run", "--duration", "3:00", "--alerts", "1:30,0:30,0:10", "--faketime", "--json"],
            capsys,
        )
        wall = time.monotonic() - started
        assert code == 0
        lines = json_lines(out)
        alerts = [l for l in lines if l["event"] == "alert_fired"]
        assert [(a["alert_index"], a["session_time_s"]) for a in alerts] == [
            (0, 90.0),
            (1, 150.0),
            (2, 170.0),
            (-1, 180.0),
        ]
        assert lines[-1] == {"event": "phase", "phase": "finished", "session_time_s": 180.0}
        assert wall < 1.0

    def test_off_grid_alert_rejected(self, capsys):
        code, out, err = run_cli(["run", "--duration", "3:00", "--alerts", "0:33"], capsys)
        assert code == 1
        assert "OffGrid" in err

    def test_out_of_range_alert_rejected(self, capsys):
        code, out, err = run_cli(["run", "--duration", "3:00", "--alerts", "4:00"], capsys)
        assert code == 1
        assert "OutOfRange" in err

    def test_unknown_flag_is_user_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--duration", "3:00", "--warp-speed"])
        assert exc.value.code == 1

    def test_modality_toggles_shape_transcript(self, capsys):
        code, out, _ = run_cli(
            [
                "run", "--duration", "0:30", "--alerts", "0:15", "--faketime", "--json",
                "--no-visual", "--no-auditory", "--no-speech",
            ],
            capsys,
        )
        assert code == 0
        alerts = [l for l in json_lines(out) if l["event"] == "alert_fired"]
        assert all(a["channels"] == ["haptic"] for a in alerts)

    def test_human_transcript_mentions_alerts(self, capsys):
        code, out, _ = run_cli(
            ["run", "--duration", "0:30", "--alerts", "0:15", "--faketime"], capsys
        )
        assert code == 0
        assert "Reminder 1" in out
        assert "Time is up" in out
        assert "\a" in out  # terminal bell for the auditory channel

    def test_countup_display(self, capsys):
        code, out, _ = run_cli(
            ["run", "--duration", "0:15", "--alerts", "0:05", "--faketime", "--json",
             "--display", "countup"],
            capsys,
        )
        ticks = [l for l in json_lines(out) if l["event"] == "tick"]
        assert ticks[0]["display"] == "00:01"
        assert ticks[-1]["display"] == "00:15"

    def test_speech_cmd_receives_utterance(self, capsys, tmp_path):
        transcript = tmp_path / "spoken.txt"
        script = tmp_path / "speak.sh"
        script.write_text(f'#!/bin/sh\necho "$1" >> {transcript}\n')
        script.chmod(0o755)
        code, _, _ = run_cli(
            ["run", "--duration", "0:30", "--alerts", "0:15", "--faketime",
             "--speech-cmd", str(script)],
            capsys,
        )
        assert code == 0
        deadline = time.monotonic() + 5
        while time.monotonic() < deadline:
            if transcript.exists() and len(transcript.read_text().splitlines()) >= 2:
                break
            time.sleep(0.05)
        spoken = transcript.read_text().splitlines()
        assert "15 seconds remaining" in spoken
        assert "Time is up" in spoken


class ScaledClock:
    """Real monotonic clock running `scale` times faster."""

    def __init__(self, scale):
        self.scale = scale
        self._t0 = time.monotonic()

    def now(self):
        return (time.monotonic() - self._t0) * self.scale


def test_faketime_matches_realtime_transcript(fig1_config, monkeypatch):
    """Alert schedule and final phase agree between the simulated clock and a
    (scaled) real clock driving the same runner."""
    from podiumtimer import runner as runner_module
    from podiumtimer.clock import ManualClock
    from podiumtimer.runner import TimerRunner

    def collect(clock):
        events = []
        TimerRunner(
            fig1_config,
            clock=clock,
            on_alert=lambda due, evs, snap: events.append(
                ("alert", due.index, due.offset_before_end_s, int(due.session_time_s))
            ),
            on_phase=lambda snap: events.append(("phase", snap.phase.value)),
        ).run()
        return events

    fake = collect(ManualClock())

    scale = 400.0
    real_sleep = time.sleep
    monkeypatch.setattr(runner_module.time, "sleep", lambda s: real_sleep(s / scale))
    real = collect(ScaledClock(scale))

    assert [e for e in fake if e[0] == "alert"] == [e for e in real if e[0] == "alert"]
    assert fake[0] == real[0] == ("phase", "running")
    assert fake[-1] == real[-1] == ("phase", "finished")


class TestAttach:
    def test_connect_failure_exits_2(self, capsys):
        code, _, err = run_cli(["attach", "--address", "ws://127.0.0.1:9", "--for", "1"], capsys)
        assert code == 2
        assert "connect failed" in err

    def test_attach_streams_events(self, tmp_path, capsys):
        handle = ServiceHandle(tmp_path, tick_rate_hz=10.0)
        try:
            code, out, _ = run_cli(
                ["attach", "--address", handle.address, "--for", "0.7"], capsys
            )
            assert code == 0
            assert "connected as" in out
        finally:
            handle.shutdown()

    def test_attach_json_passthrough(self, tmp_path, capsys):
        handle = ServiceHandle(tmp_path)
        try:
            code, out, _ = run_cli(
                ["attach", "--address", handle.address, "--for", "0.5", "--json"], capsys
            )
            assert code == 0
            first = json_lines(out)[0]
            assert first["type"] == "welcome"
        finally:
            handle.shutdown()

    def test_key_mapping(self):
        assert key_action(" ", TimerPhase.RUNNING) == "pause"
        assert key_action(" ", TimerPhase.PAUSED) == "resume"
        assert key_action(" ", TimerPhase.IDLE) is None
        assert key_action("s", TimerPhase.RUNNING) == "stop"
        assert key_action("q", TimerPhase.RUNNING) == "quit"
        assert key_action("z", TimerPhase.RUNNING) is None


class TestHapticSim:
    def test_fixed_seed_byte_identical(self, capsys):
        argv = [
            "hapticsim", "--duration", "3:00", "--alerts", "0:10",
            "--intensities", "prominent", "--jitter", "uniform:1.0", "--seed", "42", "--json",
        ]
        code_a, out_a, _ = run_cli(argv, capsys)
        code_b, out_b, _ = run_cli(argv, capsys)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_zero_jitter_report(self, capsys):
        code, out, _ = run_cli(
            ["hapticsim", "--duration", "3:00", "--alerts", "1:30", "--json"], capsys
        )
        assert code == 0
        document = json.loads(out)
        assert document["report"]["max_abs_deviation_s"] == 0.0
        assert document["delivered"] == document["intended"] == [90.0]

    def test_compile_coalescing_scenario(self, capsys):
        code, out, _ = run_cli(
            [
                "hapticsim", "--duration", "3:00", "--alerts", "0:10",
                "--intensities", "prominent", "--min-spacing", "0.5", "--json",
            ],
            capsys,
        )
        document = json.loads(out)
        assert document["schedule"]["coalesced_count"] == 2
        assert len(document["schedule"]["entries"]) == 1

    def test_csv_output(self, capsys, tmp_path):
        target = tmp_path / "pairs.csv"
        code, _, _ = run_cli(
            ["hapticsim", "--duration", "3:00", "--alerts", "0:10", "--intensities",
             "prominent", "--min-spacing", "0.1", "--jitter", "uniform:0.5",
             "--seed", "1", "--csv", str(target), "--json"],
            capsys,
        )
        assert code == 0
        rows = target.read_text().splitlines()
        assert rows[0] == "intended_s,delivered_s"
        assert len(rows) == 4

    def test_bad_jitter_flag(self, capsys):
        code, _, err = run_cli(
            ["hapticsim", "--duration", "3:00", "--alerts", "0:10", "--jitter", "chaotic:9"],
            capsys,
        )
        assert code == 1
        assert "jitter" in err

    def test_human_summary(self, capsys):
        code, out, _ = run_cli(["hapticsim", "--duration", "3:00", "--alerts", "0:10"], capsys)
        assert code == 0
        assert "max deviation" in out


class TestPresetCommands:
    def test_save_list_rename_delete_cycle(self, capsys, tmp_path):
        path = str(tmp_path / "presets.json")
        code, out, _ = run_cli(
            ["preset", "save", "--name", "Conference talk", "--duration", "3:00",
             "--alerts", "1:30,0:30,0:10", "--presets-path", path],
            capsys,
        )
        assert code == 0
        assert "Conference talk" in out

        code, out, _ = run_cli(["preset", "list", "--presets-path", path], capsys)
        assert code == 0
        assert "Conference talk" in out
        assert "03:00" in out

        code, out, _ = run_cli(
            ["preset", "rename", "--name", "Conference talk", "--new-name", "Keynote",
             "--presets-path", path],
            capsys,
        )
        assert code == 0

        code, out, _ = run_cli(
            ["preset", "delete", "--name", "Keynote", "--presets-path", path], capsys
        )
        assert code == 0
        code, out, _ = run_cli(["preset", "list", "--presets-path", path], capsys)
        assert "no presets" in out

    def test_duplicate_name_is_user_error(self, capsys, tmp_path):
        path = str(tmp_path / "presets.json")
        argv = ["preset", "save", "--name", "Same", "--duration", "3:00",
                "--presets-path", path]
        assert run_cli(argv, capsys)[0] == 0
        code, _, err = run_cli(argv, capsys)
        assert code == 1
        assert "Same" in err

    def test_list_json(self, capsys, tmp_path):
        path = str(tmp_path / "presets.json")
        run_cli(["preset", "save", "--name", "A", "--duration", "1:00", "--num-alerts", "2",
                 "--presets-path", path], capsys)
        code, out, _ = run_cli(["preset", "list", "--presets-path", path, "--json"], capsys)
        assert code == 0
        presets = json.loads(out)
        assert presets[0]["name"] == "A"
        assert presets[0]["duration_s"] == 60

    def test_env_var_path(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("PODIUMTIMER_PRESETS", str(tmp_path / "env.json"))
        run_cli(["preset", "save", "--name", "EnvBased", "--duration", "2:00"], capsys)
        code, out, _ = run_cli(["preset", "list"], capsys)
        assert "EnvBased" in out

    def test_delete_unknown_is_user_error(self, capsys, tmp_path):
        path = str(tmp_path / "presets.json")
        code, _, err = run_cli(["preset", "delete", "--name", "ghost", "--presets-path", path], capsys)
        assert code == 1
