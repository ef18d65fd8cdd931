"""Message types for the session sync protocol.

One JSON object per frame, tagged by a ``type`` field. Clients send
commands carrying a client-chosen ``req_id``; the server answers the
sender with an ack or an error echoing that id, and broadcasts state
events stamped with a strictly increasing ``seq``. Full schema and
examples live in docs/protocol.md.

``parse``/``encode`` round-trip every message exactly; anything that does
not match the schema raises ProtocolError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Union

from .errors import ProtocolError
from .modality import AlertEvent, ModalitySettings
from .presets import Preset, preset_from_json, preset_to_json
from .serialize import (
    SchemaError,
    _get,
    _get_int,
    _get_list,
    _get_number,
    _get_str,
    _require_dict,
    alert_event_from_json,
    alert_event_to_json,
    config_from_json,
    config_to_json,
    modalities_from_json,
    modalities_to_json,
    snapshot_from_json,
    snapshot_to_json,
)
from .timer import DisplayMode, TimerConfig, TimerPhase, TimerSnapshot


# -- commands (client to server) ----------------------------------------------

@dataclass(frozen=True)
class Hello:
    req_id: str


@dataclass(frozen=True)
class Configure:
    req_id: str
    config: TimerConfig


@dataclass(frozen=True)
class LoadPreset:
    req_id: str
    preset_id: str


@dataclass(frozen=True)
class Start:
    req_id: str


@dataclass(frozen=True)
class Pause:
    req_id: str


@dataclass(frozen=True)
class Resume:
    req_id: str


@dataclass(frozen=True)
class Stop:
    req_id: str


@dataclass(frozen=True)
class SetDisplayMode:
    req_id: str
    mode: DisplayMode


@dataclass(frozen=True)
class SetModalities:
    req_id: str
    modalities: ModalitySettings


@dataclass(frozen=True)
class SavePreset:
    req_id: str
    name: str


@dataclass(frozen=True)
class DeletePreset:
    req_id: str
    preset_id: str


Command = Union[
    Hello,
    Configure,
    LoadPreset,
    Start,
    Pause,
    Resume,
    Stop,
    SetDisplayMode,
    SetModalities,
    SavePreset,
    DeletePreset,
]


# -- events (server to client) ---------------------------------------------------

@dataclass(frozen=True)
class Welcome:
    client_id: str
    seq: int
    snapshot: TimerSnapshot
    modalities: ModalitySettings
    presets: tuple[Preset, ...]


@dataclass(frozen=True)
class Snapshot:
    seq: int
    snapshot: TimerSnapshot
    modalities: ModalitySettings


@dataclass(frozen=True)
class Tick:
    seq: int
    elapsed_s: float
    remaining_s: float


@dataclass(frozen=True)
class AlertFired:
    seq: int
    alert_index: int
    offset_before_end_s: int
    session_time_s: float
    events: tuple[AlertEvent, ...]


@dataclass(frozen=True)
class StateChanged:
    seq: int
    phase: TimerPhase


@dataclass(frozen=True)
class PresetList:
    seq: int
    presets: tuple[Preset, ...]


@dataclass(frozen=True)
class Error:
    code: str
    message: str
    in_reply_to: str | None = None


@dataclass(frozen=True)
class Ack:
    in_reply_to: str


Event = Union[Welcome, Snapshot, Tick, AlertFired, StateChanged, PresetList, Error, Ack]
Message = Union[Command, Event]


# -- encoding ----------------------------------------------------------------------

def message_to_json(message: Message) -> dict:
    if isinstance(message, Hello):
        return {"type": "hello", "req_id": message.req_id}
    if isinstance(message, Configure):
        return {
            "type": "configure",
            "req_id": message.req_id,
            "config": config_to_json(message.config),
        }
    if isinstance(message, LoadPreset):
        return {"type": "load_preset", "req_id": message.req_id, "preset_id": message.preset_id}
    if isinstance(message, Start):
        return {"type": "start", "req_id": message.req_id}
    if isinstance(message, Pause):
        return {"type": "pause", "req_id": message.req_id}
    if isinstance(message, Resume):
        return {"type": "resume", "req_id": message.req_id}
    if isinstance(message, Stop):
        return {"type": "stop", "req_id": message.req_id}
    if isinstance(message, SetDisplayMode):
        return {"type": "set_display_mode", "req_id": message.req_id, "mode": message.mode.value}
    if isinstance(message, SetModalities):
        return {
            "type": "set_modalities",
            "req_id": message.req_id,
            "modalities": modalities_to_json(message.modalities),
        }
    if isinstance(message, SavePreset):
        return {"type": "save_preset", "req_id": message.req_id, "name": message.name}
    if isinstance(message, DeletePreset):
        return {"type": "delete_preset", "req_id": message.req_id, "preset_id": message.preset_id}

    if isinstance(message, Welcome):
        return {
            "type": "welcome",
            "client_id": message.client_id,
            "seq": message.seq,
            "snapshot": snapshot_to_json(message.snapshot),
            "modalities": modalities_to_json(message.modalities),
            "presets": [preset_to_json(p) for p in message.presets],
        }
    if isinstance(message, Snapshot):
        return {
            "type": "snapshot",
            "seq": message.seq,
            "snapshot": snapshot_to_json(message.snapshot),
            "modalities": modalities_to_json(message.modalities),
        }
    if isinstance(message, Tick):
        return {
            "type": "tick",
            "seq": message.seq,
            "elapsed_s": message.elapsed_s,
            "remaining_s": message.remaining_s,
        }
    if isinstance(message, AlertFired):
        return {
            "type": "alert_fired",
            "seq": message.seq,
            "alert_index": message.alert_index,
            "offset_before_end_s": message.offset_before_end_s,
            "session_time_s": message.session_time_s,
            "events": [alert_event_to_json(e) for e in message.events],
        }
    if isinstance(message, StateChanged):
        return {"type": "state_changed", "seq": message.seq, "phase": message.phase.value}
    if isinstance(message, PresetList):
        return {
            "type": "preset_list",
            "seq": message.seq,
            "presets": [preset_to_json(p) for p in message.presets],
        }
    if isinstance(message, Error):
        return {
            "type": "error",
            "code": message.code,
            "message": message.message,
            "in_reply_to": message.in_reply_to,
        }
    if isinstance(message, Ack):
        return {"type": "ack", "in_reply_to": message.in_reply_to}
    raise TypeError(f"not a protocol message: {message!r}")


def encode(message: Message) -> str:
    return json.dumps(message_to_json(message), allow_nan=False, separators=(",", ":"))


# -- decoding ----------------------------------------------------------------------

def _req_id(data: dict, where: str) -> str:
    return _get_str(data, "req_id", where)


def _parse_hello(d: dict) -> Hello:
    return Hello(req_id=_req_id(d, "hello"))


def _parse_configure(d: dict) -> Configure:
    return Configure(
        req_id=_req_id(d, "configure"),
        config=config_from_json(_get(d, "config", "configure"), "configure.config"),
    )


def _parse_load_preset(d: dict) -> LoadPreset:
    return LoadPreset(
        req_id=_req_id(d, "load_preset"),
        preset_id=_get_str(d, "preset_id", "load_preset"),
    )


def _parse_set_display_mode(d: dict) -> SetDisplayMode:
    raw = _get_str(d, "mode", "set_display_mode")
    try:
        mode = DisplayMode(raw)
    except ValueError:
        raise SchemaError("set_display_mode.mode", f"unknown mode {raw!r}") from None
    return SetDisplayMode(req_id=_req_id(d, "set_display_mode"), mode=mode)


def _parse_set_modalities(d: dict) -> SetModalities:
    return SetModalities(
        req_id=_req_id(d, "set_modalities"),
        modalities=modalities_from_json(
            _get(d, "modalities", "set_modalities"), "set_modalities.modalities"
        ),
    )


def _parse_save_preset(d: dict) -> SavePreset:
    return SavePreset(req_id=_req_id(d, "save_preset"), name=_get_str(d, "name", "save_preset"))


def _parse_delete_preset(d: dict) -> DeletePreset:
    return DeletePreset(
        req_id=_req_id(d, "delete_preset"),
        preset_id=_get_str(d, "preset_id", "delete_preset"),
    )


def _parse_presets(d: dict, where: str) -> tuple[Preset, ...]:
    return tuple(
        preset_from_json(item, f"{where}.presets[{i}]")
        for i, item in enumerate(_get_list(d, "presets", where))
    )


def _parse_welcome(d: dict) -> Welcome:
    return Welcome(
        client_id=_get_str(d, "client_id", "welcome"),
        seq=_get_int(d, "seq", "welcome"),
        snapshot=snapshot_from_json(_get(d, "snapshot", "welcome"), "welcome.snapshot"),
        modalities=modalities_from_json(_get(d, "modalities", "welcome"), "welcome.modalities"),
        presets=_parse_presets(d, "welcome"),
    )


def _parse_snapshot(d: dict) -> Snapshot:
    return Snapshot(
        seq=_get_int(d, "seq", "snapshot"),
        snapshot=snapshot_from_json(_get(d, "snapshot", "snapshot"), "snapshot.snapshot"),
        modalities=modalities_from_json(_get(d, "modalities", "snapshot"), "snapshot.modalities"),
    )


def _parse_tick(d: dict) -> Tick:
    return Tick(
        seq=_get_int(d, "seq", "tick"),
        elapsed_s=_get_number(d, "elapsed_s", "tick"),
        remaining_s=_get_number(d, "remaining_s", "tick"),
    )


def _parse_alert_fired(d: dict) -> AlertFired:
    return AlertFired(
        seq=_get_int(d, "seq", "alert_fired"),
        alert_index=_get_int(d, "alert_index", "alert_fired"),
        offset_before_end_s=_get_int(d, "offset_before_end_s", "alert_fired"),
        session_time_s=_get_number(d, "session_time_s", "alert_fired"),
        events=tuple(
            alert_event_from_json(item, f"alert_fired.events[{i}]")
            for i, item in enumerate(_get_list(d, "events", "alert_fired"))
        ),
    )


def _parse_state_changed(d: dict) -> StateChanged:
    raw = _get_str(d, "phase", "state_changed")
    try:
        phase = TimerPhase(raw)
    except ValueError:
        raise SchemaError("state_changed.phase", f"unknown phase {raw!r}") from None
    return StateChanged(seq=_get_int(d, "seq", "state_changed"), phase=phase)


def _parse_preset_list(d: dict) -> PresetList:
    return PresetList(seq=_get_int(d, "seq", "preset_list"), presets=_parse_presets(d, "preset_list"))


def _parse_error(d: dict) -> Error:
    reply = d.get("in_reply_to")
    if reply is not None and not isinstance(reply, str):
        raise SchemaError("error.in_reply_to", f"expected a string or null, got {reply!r}")
    return Error(
        code=_get_str(d, "code", "error"),
        message=_get_str(d, "message", "error"),
        in_reply_to=reply,
    )


def _parse_ack(d: dict) -> Ack:
    return Ack(in_reply_to=_get_str(d, "in_reply_to", "ack"))


_PARSERS: dict[str, Callable[[dict], Message]] = {
    "hello": _parse_hello,
    "configure": _parse_configure,
    "load_preset": _parse_load_preset,
    "start": lambda d: Start(req_id=_req_id(d, "start")),
    "pause": lambda d: Pause(req_id=_req_id(d, "pause")),
    "resume": lambda d: Resume(req_id=_req_id(d, "resume")),
    "stop": lambda d: Stop(req_id=_req_id(d, "stop")),
    "set_display_mode": _parse_set_display_mode,
    "set_modalities": _parse_set_modalities,
    "save_preset": _parse_save_preset,
    "delete_preset": _parse_delete_preset,
    "welcome": _parse_welcome,
    "snapshot": _parse_snapshot,
    "tick": _parse_tick,
    "alert_fired": _parse_alert_fired,
    "state_changed": _parse_state_changed,
    "preset_list": _parse_preset_list,
    "error": _parse_error,
    "ack": _parse_ack,
}

COMMAND_TYPES = frozenset(
    [
        "hello",
        "configure",
        "load_preset",
        "start",
        "pause",
        "resume",
        "stop",
        "set_display_mode",
        "set_modalities",
        "save_preset",
        "delete_preset",
    ]
)


def message_from_json(obj: Any) -> Message:
    try:
        data = _require_dict(obj, "message")
        tag = _get_str(data, "type", "message")
        parser = _PARSERS.get(tag)
        if parser is None:
            raise SchemaError("message.type", f"unknown message type {tag!r}")
        return parser(data)
    except SchemaError as exc:
        raise ProtocolError(str(exc)) from None


def parse(text: str) -> Message:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed JSON: {exc.msg}") from None
    return message_from_json(obj)


def parse_command(text: str) -> Command:
    message = parse(text)
    if message_to_json(message)["type"] not in COMMAND_TYPES:
        raise ProtocolError(f"expected a command, got {type(message).__name__}")
    return message  # type: ignore[return-value]
