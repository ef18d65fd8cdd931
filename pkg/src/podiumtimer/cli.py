"""Command line front end.

Subcommands: run an embedded timer, serve the session service, attach to a
running service, manage presets, and size up the notification-based haptic
workaround. Exit codes: 0 success, 1 user error (bad flags or validation),
2 runtime error (connection or storage trouble).

Terminal renderings of the four modalities: the bell character stands in
for auditory, a high-contrast banner line for visual, a printed marker for
haptic, and --speech-cmd hands utterances to an external program. Output
stays line-oriented so it reads well in a screen reader.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import shlex
import subprocess
import sys
import threading
import time
from pathlib import Path

from .client import ClientView
from .clock import ManualClock
from .errors import (
    ConnectError,
    InvalidConfig,
    InvalidDuration,
    PodiumTimerError,
    PresetError,
    StorageFailure,
)
from .hapticsim import (
    DEFAULT_MIN_SPACING_S,
    JitterModel,
    compile_schedule,
    simulate,
)
from .modality import (
    AlertSink,
    Channel,
    HapticIntensity,
    HapticPattern,
    ModalitySettings,
    SinkHub,
)
from .presets import PresetStore, default_presets_path, preset_to_json
from .protocol import (
    Ack,
    AlertFired,
    Error,
    Pause,
    PresetList,
    Resume,
    Snapshot,
    StateChanged,
    Stop,
    Tick,
    Welcome,
    encode,
    parse,
)
from .runner import TimerRunner
from .scheduling import GRID_S, AlertPlan, AlertSpec, default_plan, validate_plan
from .service import (
    DEFAULT_PORT,
    DEFAULT_TICK_RATE_HZ,
    SessionCore,
    SessionService,
)
from .timer import DisplayMode, TimerConfig, TimerPhase, display_value, format_mm_ss

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class _Parser(argparse.ArgumentParser):
    # The exit-code contract reserves 2 for runtime errors; argparse
    # defaults to 2 for usage problems.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_time_arg(text: str) -> int:
    """Accept 'MM:SS' or plain seconds."""
    text = text.strip()
    if ":" in text:
        minutes_part, _, seconds_part = text.partition(":")
        try:
            minutes, seconds = int(minutes_part), int(seconds_part)
        except ValueError:
            raise ValueError(f"cannot parse time {text!r} (expected MM:SS or seconds)") from None
        if minutes < 0 or not 0 <= seconds < 60:
            raise ValueError(f"cannot parse time {text!r} (seconds must be 00-59)")
        return minutes * 60 + seconds
    try:
        seconds = int(text)
    except ValueError:
        raise ValueError(f"cannot parse time {text!r} (expected MM:SS or seconds)") from None
    if seconds < 0:
        raise ValueError(f"time must not be negative, got {text!r}")
    return seconds


def _parse_intensities(text: str | None, count: int) -> list[HapticIntensity]:
    if text is None:
        return [
            HapticIntensity.PROMINENT if i == count - 1 else HapticIntensity.NORMAL
            for i in range(count)
        ]
    values = []
    for raw in text.split(","):
        raw = raw.strip().lower()
        try:
            values.append(HapticIntensity(raw))
        except ValueError:
            raise ValueError(f"unknown intensity {raw!r} (expected normal or prominent)") from None
    if len(values) != count:
        raise ValueError(f"got {len(values)} intensities for {count} alerts")
    return values


def build_config(
    duration_text: str,
    alerts_text: str | None,
    num_alerts: int,
    intensities_text: str | None = None,
) -> TimerConfig:
    """Turn CLI flags into a validated TimerConfig.

    Validation verdicts come from the same validate_plan the engine uses;
    failures raise InvalidConfig whose message is the full report.
    """
    duration_s = parse_time_arg(duration_text)
    if duration_s < GRID_S or duration_s % GRID_S != 0:
        raise InvalidConfig(
            f"duration must be a multiple of {GRID_S}s and >= {GRID_S}s, got {duration_s}s"
        )
    if alerts_text is not None:
        offsets = [parse_time_arg(part) for part in alerts_text.split(",") if part.strip()]
        if not offsets:
            raise ValueError("--alerts must list at least one offset")
        intensities = _parse_intensities(intensities_text, len(offsets))
        alerts = tuple(
            AlertSpec(offset_before_end_s=o, haptic_intensity=i)
            for o, i in zip(offsets, intensities)
        )
        config = TimerConfig(duration_s=duration_s, alerts=alerts)
        report = validate_plan(config.plan)
        if not report.ok:
            raise InvalidConfig(str(report))
        return config
    plan = default_plan(duration_s, num_alerts)
    if intensities_text is not None:
        intensities = _parse_intensities(intensities_text, len(plan.alerts))
        alerts = tuple(
            AlertSpec(a.offset_before_end_s, a.modalities, i)
            for a, i in zip(plan.alerts, intensities)
        )
        plan = AlertPlan(duration_s=plan.duration_s, alerts=alerts)
    return TimerConfig(duration_s=plan.duration_s, alerts=plan.alerts)


def _flag_env(flag_value, env_name: str, default, cast=str):
    """Precedence: flag > environment > default."""
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(env_name)
    if raw:
        try:
            return cast(raw)
        except (TypeError, ValueError):
            raise ValueError(f"cannot parse {env_name}={raw!r}") from None
    return default


def _emit_json(obj: dict) -> None:
    print(json.dumps(obj, separators=(",", ":")), flush=True)


class _SpeechCommandSink:
    """Runs an external command with the utterance as its last argument."""

    channel = Channel.SPEECH

    def __init__(self, command: str):
        self.argv = shlex.split(command)

    def deliver(self, event) -> None:
        subprocess.Popen(
            self.argv + [str(event.payload)],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )


def _alert_label(due) -> str:
    return "Time is up" if due.is_terminal else f"Reminder {due.index + 1}"


def _render_alert_line(due, events, tty: bool) -> str:
    channels = {e.channel: e for e in events}
    label = _alert_label(due)
    parts = [f"{format_mm_ss(int(round(due.session_time_s)))}  ALERT {label}"]
    speech_event = channels.get(Channel.SPEECH)
    if speech_event is not None and not due.is_terminal:
        parts.append(f'"{speech_event.payload}"')
    haptic_event = channels.get(Channel.HAPTIC)
    if haptic_event is not None:
        pattern = haptic_event.payload
        assert isinstance(pattern, HapticPattern)
        parts.append(f"[HAPTIC {pattern.intensity.value} x{len(pattern.pulses)}]")
    line = "  ".join(parts)
    if Channel.VISUAL in channels and tty:
        line = f"\x1b[1;7m{line}\x1b[0m"
    if Channel.AUDITORY in channels:
        bell = "\a\a" if due.is_terminal else "\a"
        line += bell
    return line


def cmd_run(args) -> int:
    try:
        config = build_config(args.duration, args.alerts, args.num_alerts, args.intensities)
    except (ValueError, InvalidConfig, InvalidDuration) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    settings = ModalitySettings(
        visual=args.visual, auditory=args.auditory, speech=args.speech, haptic=args.haptic
    )
    clock = ManualClock() if args.faketime else None
    hub = None
    if args.speech_cmd and settings.speech:
        hub = SinkHub()
        hub.add(_SpeechCommandSink(args.speech_cmd))

    tty = sys.stdout.isatty()
    json_mode = args.json

    def on_phase(snapshot):
        if json_mode:
            _emit_json(
                {
                    "event": "phase",
                    "phase": snapshot.phase.value,
                    "session_time_s": snapshot.elapsed_s,
                }
            )
        elif snapshot.phase is TimerPhase.RUNNING:
            offsets = ", ".join(format_mm_ss(a.offset_before_end_s) for a in config.alerts)
            print(f"running {format_mm_ss(config.duration_s)}; alerts {offsets} before end", flush=True)
        else:
            print(snapshot.phase.value, flush=True)

    def on_tick(snapshot):
        if json_mode:
            _emit_json(
                {
                    "event": "tick",
                    "elapsed_s": snapshot.elapsed_s,
                    "remaining_s": snapshot.remaining_s,
                    "display": display_value(snapshot),
                }
            )
        else:
            print(display_value(snapshot), flush=True)

    def on_alert(due, events, snapshot):
        if hub is not None:
            # Speech goes through the sink hub; the printed line covers the rest.
            events = [e for e in events if e.channel is not Channel.SPEECH]
        if json_mode:
            record = {
                "event": "alert_fired",
                "alert_index": due.index,
                "offset_before_end_s": due.offset_before_end_s,
                "session_time_s": due.session_time_s,
                "channels": [e.channel.value for e in events],
            }
            for e in events:
                if e.channel is Channel.SPEECH:
                    record["speech"] = e.payload
                if e.channel is Channel.HAPTIC:
                    record["haptic_pulses"] = len(e.payload.pulses)
            _emit_json(record)
        else:
            print(_render_alert_line(due, events, tty), flush=True)

    runner = TimerRunner(
        config,
        settings=settings,
        clock=clock,
        tick_rate_hz=args.tick_rate,
        display_mode=DisplayMode(args.display),
        hub=hub,
        on_tick=on_tick,
        on_alert=on_alert,
        on_phase=on_phase,
    )
    try:
        runner.run()
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        if hub is not None:
            hub.close()
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        host = _flag_env(args.bind, "PODIUMTIMER_BIND", "127.0.0.1")
        port = _flag_env(args.port, "PODIUMTIMER_PORT", DEFAULT_PORT, int)
        tick_rate = _flag_env(args.tick_rate, "PODIUMTIMER_TICK_RATE", DEFAULT_TICK_RATE_HZ, float)
        presets_path = _flag_env(args.presets_path, "PODIUMTIMER_PRESETS", None)
        ui_dir = _flag_env(args.ui_dir, "PODIUMTIMER_UI", None)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    if presets_path is None:
        presets_path = default_presets_path()
    if ui_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = bundled if bundled.is_dir() else None

    try:
        store = PresetStore.load_file(presets_path)
    except PresetError as exc:
        print(f"cannot load presets: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    for issue in store.load_issues:
        print(f"warning: skipped preset: {issue}", file=sys.stderr)

    core = SessionCore(presets=store)
    service = SessionService(core, host=host, port=port, tick_rate_hz=tick_rate, ui_dir=ui_dir)
    print(f"serving on ws://{host}:{port} (presets: {presets_path})", flush=True)
    if ui_dir:
        print(f"web UI: http://{host}:{port}/", flush=True)
    try:
        asyncio.run(service.run())
    except KeyboardInterrupt:
        return EXIT_OK
    except OSError as exc:
        print(f"cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def key_action(key: str, phase: TimerPhase) -> str | None:
    """Map an interactive key to a command name (or 'quit'/None)."""
    if key == " ":
        if phase is TimerPhase.RUNNING:
            return "pause"
        if phase is TimerPhase.PAUSED:
            return "resume"
        return None
    if key in ("s", "S"):
        return "stop"
    if key in ("q", "Q"):
        return "quit"
    return None


def render_event(message, view: ClientView) -> list[str]:
    """Human-readable lines for one server event (after view.apply)."""
    if isinstance(message, Welcome):
        preset_names = ", ".join(p.name for p in message.presets) or "none"
        return [
            f"connected as {message.client_id}: {view.phase.value}, "
            f"{format_mm_ss(message.snapshot.config.duration_s)} session (presets: {preset_names})"
        ]
    if isinstance(message, Snapshot):
        return [f"state: {view.phase.value}, {_view_display(view)}"]
    if isinstance(message, Tick):
        return [_view_display(view)]
    if isinstance(message, AlertFired):
        label = "Time is up" if message.alert_index < 0 else f"Reminder {message.alert_index + 1}"
        channels = ",".join(e.channel.value for e in message.events) or "none"
        return [f"ALERT {label} (channels: {channels})"]
    if isinstance(message, StateChanged):
        return [f"phase: {message.phase.value}"]
    if isinstance(message, PresetList):
        names = ", ".join(p.name for p in message.presets) or "none"
        return [f"presets: {names}"]
    if isinstance(message, Error):
        return [f"error[{message.code}]: {message.message}"]
    if isinstance(message, Ack):
        return []
    return []


def _view_display(view: ClientView) -> str:
    import math

    if view.display_mode is DisplayMode.COUNT_UP:
        return format_mm_ss(int(math.floor(view.elapsed_s + 1e-9)))
    return format_mm_ss(int(math.ceil(view.remaining_s - 1e-9)))


def cmd_attach(args) -> int:
    from websockets.sync.client import connect

    try:
        conn = connect(args.address, open_timeout=5)
    except Exception as exc:
        print(f"connect failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    view = ClientView()
    stop_flag = threading.Event()
    request_counter = [0]

    def send_command(name: str) -> None:
        request_counter[0] += 1
        req_id = f"key-{request_counter[0]}"
        message = {"pause": Pause, "resume": Resume, "stop": Stop}[name](req_id=req_id)
        conn.send(encode(message))

    if sys.stdin.isatty():
        threading.Thread(
            target=_key_loop, args=(view, send_command, stop_flag), daemon=True
        ).start()

    deadline = time.monotonic() + args.for_seconds if args.for_seconds else None
    try:
        while not stop_flag.is_set():
            timeout = 0.25
            if deadline is not None:
                timeout = min(timeout, max(0.0, deadline - time.monotonic()))
            try:
                frame = conn.recv(timeout=timeout)
            except TimeoutError:
                if deadline is not None and time.monotonic() >= deadline:
                    return EXIT_OK
                continue
            except Exception:
                print("connection closed", file=sys.stderr)
                return EXIT_RUNTIME
            if isinstance(frame, bytes):
                frame = frame.decode("utf-8", errors="replace")
            message = parse(frame)
            view.apply(message)
            if args.json:
                print(frame, flush=True)
            else:
                for line in render_event(message, view):
                    print(line, flush=True)
            if deadline is not None and time.monotonic() >= deadline:
                return EXIT_OK
        return EXIT_OK
    except KeyboardInterrupt:
        return EXIT_OK
    finally:
        stop_flag.set()
        try:
            conn.close()
        except Exception:
            pass


def _key_loop(view: ClientView, send_command, stop_flag: threading.Event) -> None:
    import termios
    import tty as tty_mod

    fd = sys.stdin.fileno()
    old = termios.tcgetattr(fd)
    try:
        tty_mod.setcbreak(fd)
        while not stop_flag.is_set():
            key = sys.stdin.read(1)
            action = key_action(key, view.phase)
            if action == "quit":
                stop_flag.set()
                return
            if action is not None:
                try:
                    send_command(action)
                except Exception:
                    stop_flag.set()
                    return
    finally:
        termios.tcsetattr(fd, termios.TCSADRAIN, old)


def _open_store(args) -> PresetStore:
    path = _flag_env(getattr(args, "presets_path", None), "PODIUMTIMER_PRESETS", None)
    if path is None:
        path = default_presets_path()
    return PresetStore.load_file(path)


def _resolve_preset(store: PresetStore, args):
    if getattr(args, "id", None):
        return store.get(args.id)
    preset = store.find_by_name(args.name)
    if preset is None:
        raise PresetError(f"no preset named {args.name!r}")
    return preset


def cmd_preset(args) -> int:
    try:
        store = _open_store(args)
    except PresetError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RUNTIME
    for issue in store.load_issues:
        print(f"warning: skipped preset: {issue}", file=sys.stderr)

    try:
        if args.preset_command == "list":
            presets = store.list()
            if args.json:
                print(json.dumps([preset_to_json(p) for p in presets], indent=2))
            elif not presets:
                print("no presets")
            else:
                for p in presets:
                    offsets = ",".join(
                        format_mm_ss(a.offset_before_end_s) for a in p.config.alerts
                    )
                    print(f"{p.name}\t{format_mm_ss(p.config.duration_s)}\t{offsets}\t{p.id}")
            return EXIT_OK
        if args.preset_command == "save":
            config = build_config(args.duration, args.alerts, args.num_alerts, args.intensities)
            preset = store.save(args.name, config)
            if args.json:
                print(json.dumps(preset_to_json(preset), indent=2))
            else:
                print(f"saved {preset.name!r} ({preset.id})")
            return EXIT_OK
        if args.preset_command == "delete":
            preset = _resolve_preset(store, args)
            store.delete(preset.id)
            print(f"deleted {preset.name!r}")
            return EXIT_OK
        if args.preset_command == "rename":
            preset = _resolve_preset(store, args)
            renamed = store.rename(preset.id, args.new_name)
            print(f"renamed to {renamed.name!r}")
            return EXIT_OK
    except StorageFailure as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, PodiumTimerError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError(f"unknown preset command {args.preset_command!r}")


def parse_jitter(spec: str, seed: int) -> JitterModel:
    spec = spec.strip().lower()
    if spec == "none":
        return JitterModel.none()
    kind, _, params = spec.partition(":")
    try:
        if kind == "uniform":
            return JitterModel.uniform(float(params), seed=seed)
        if kind == "gaussian":
            mean_text, _, std_text = params.partition(",")
            return JitterModel.gaussian(float(mean_text), float(std_text), seed=seed)
    except ValueError as exc:
        raise ValueError(f"bad jitter spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown jitter kind {kind!r} (expected none, uniform:MAX, gaussian:MEAN,STD)")


def cmd_hapticsim(args) -> int:
    try:
        config = build_config(args.duration, args.alerts, args.num_alerts, args.intensities)
        jitter = parse_jitter(args.jitter, args.seed)
        schedule = compile_schedule(config.plan, args.min_spacing)
    except (ValueError, PodiumTimerError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE

    delivered, report = simulate(schedule, jitter)
    document = {
        "schedule": {
            "min_spacing_s": schedule.min_spacing_s,
            "coalesced_count": schedule.coalesced_count,
            "entries": [
                {
                    "fire_at_s": e.fire_at_s,
                    "pattern_slot": e.pattern_slot,
                    "merged_pulses": e.merged_pulses,
                }
                for e in schedule.entries
            ],
        },
        "jitter": {"kind": jitter.kind.value, "seed": jitter.seed},
        "intended": schedule.fire_times(),
        "delivered": delivered,
        "report": report.to_json(),
    }
    if jitter.kind.value == "uniform":
        document["jitter"]["max_delay_s"] = jitter.max_delay_s
    elif jitter.kind.value == "gaussian":
        document["jitter"]["mean_s"] = jitter.mean_s
        document["jitter"]["std_s"] = jitter.std_s

    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as handle:
            handle.write("intended_s,delivered_s\n")
            for intended, actual in zip(schedule.fire_times(), delivered):
                handle.write(f"{intended!r},{actual!r}\n")

    if args.json:
        print(json.dumps(document, indent=2))
    else:
        print(f"entries: {len(schedule.entries)} (coalesced at compile: {schedule.coalesced_count})")
        print(f"max deviation: {report.max_abs_deviation_s:.4f}s")
        print(f"mean deviation: {report.mean_abs_deviation_s:.4f}s")
        print(f"order violations: {report.order_violations}")
        print(f"perceptually merged after jitter: {report.coalesced_count}")
    return EXIT_OK


def _add_plan_flags(parser, duration_required: bool = True) -> None:
    parser.add_argument("--duration", required=duration_required, help="total length, MM:SS or seconds")
    parser.add_argument("--alerts", help="comma-separated offsets before end (MM:SS or seconds)")
    parser.add_argument(
        "--num-alerts", type=int, default=3, choices=(1, 2, 3),
        help="how many default alerts when --alerts is omitted",
    )
    parser.add_argument("--intensities", help="comma-separated haptic levels (normal|prominent)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="podiumtimer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a timer in this terminal")
    _add_plan_flags(run_p)
    for channel in ("visual", "auditory", "speech", "haptic"):
        run_p.add_argument(
            f"--{channel}", action=argparse.BooleanOptionalAction, default=True,
            help=f"toggle the {channel} channel",
        )
    run_p.add_argument("--display", choices=("countdown", "countup"), default="countdown")
    run_p.add_argument("--tick-rate", type=float, default=1.0, help="status lines per second")
    run_p.add_argument("--faketime", action="store_true", help="simulated clock; finish instantly")
    run_p.add_argument("--speech-cmd", help="external command to speak utterances")
    run_p.add_argument("--json", action="store_true", help="machine-readable transcript")
    run_p.set_defaults(func=cmd_run)

    serve_p = sub.add_parser("serve", help="host the local session service")
    serve_p.add_argument("--bind", help="bind address (default 127.0.0.1)")
    serve_p.add_argument("--port", type=int, help=f"port (default {DEFAULT_PORT})")
    serve_p.add_argument("--presets-path", help="preset file location")
    serve_p.add_argument("--tick-rate", type=float, help="tick broadcast rate in Hz (default 1)")
    serve_p.add_argument("--ui-dir", help="directory with the built web UI")
    serve_p.add_argument("--json", action="store_true", help="machine-readable logs")
    serve_p.set_defaults(func=cmd_serve)

    attach_p = sub.add_parser("attach", help="follow and control a running service")
    attach_p.add_argument(
        "--address", default=f"ws://127.0.0.1:{DEFAULT_PORT}", help="service WebSocket URL"
    )
    attach_p.add_argument("--for", dest="for_seconds", type=float, default=None,
                          help="detach after this many seconds")
    attach_p.add_argument("--json", action="store_true", help="print raw frames")
    attach_p.set_defaults(func=cmd_attach)

    preset_p = sub.add_parser("preset", help="manage stored presets")
    preset_sub = preset_p.add_subparsers(dest="preset_command", required=True)
    list_p = preset_sub.add_parser("list")
    list_p.add_argument("--presets-path")
    list_p.add_argument("--json", action="store_true")
    save_p = preset_sub.add_parser("save")
    save_p.add_argument("--name", required=True)
    _add_plan_flags(save_p)
    save_p.add_argument("--presets-path")
    save_p.add_argument("--json", action="store_true")
    delete_p = preset_sub.add_parser("delete")
    group = delete_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--id")
    group.add_argument("--name")
    delete_p.add_argument("--presets-path")
    rename_p = preset_sub.add_parser("rename")
    group = rename_p.add_mutually_exclusive_group(required=True)
    group.add_argument("--id")
    group.add_argument("--name")
    rename_p.add_argument("--new-name", required=True)
    rename_p.add_argument("--presets-path")
    preset_p.set_defaults(func=cmd_preset)

    haptic_p = sub.add_parser("hapticsim", help="model the notification haptic workaround")
    _add_plan_flags(haptic_p)
    haptic_p.add_argument("--min-spacing", type=float, default=DEFAULT_MIN_SPACING_S,
                          help="minimum notification spacing in seconds")
    haptic_p.add_argument("--jitter", default="none", help="none | uniform:MAX | gaussian:MEAN,STD")
    haptic_p.add_argument("--seed", type=int, default=0)
    haptic_p.add_argument("--json", action="store_true", help="full JSON report")
    haptic_p.add_argument("--csv", help="write intended,delivered pairs to this file")
    haptic_p.set_defaults(func=cmd_hapticsim)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConnectError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
