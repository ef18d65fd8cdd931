"""JSON mapping for the shared value types.

Used by both the preset file format and the wire protocol so a config
serializes identically everywhere. Parsers are strict about shape and
raise :class:`SchemaError` with a dotted field path for context; callers
wrap that in their own error type (ParseError for files, ProtocolError
for frames).
"""

from __future__ import annotations

from typing import Any

from .modality import (
    AlertEvent,
    Channel,
    HapticIntensity,
    HapticPattern,
    ModalitySettings,
)
from .scheduling import AlertSpec
from .timer import DisplayMode, TimerConfig, TimerPhase, TimerSnapshot


class SchemaError(ValueError):
    """A JSON value does not match the documented schema."""

    def __init__(self, where: str, problem: str):
        super().__init__(f"{where}: {problem}")
        self.where = where
        self.problem = problem


def _require_dict(obj: Any, where: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(where, f"expected an object, got {type(obj).__name__}")
    return obj


def _get(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{where}.{key}", "missing required field")
    return obj[key]


def _get_int(obj: dict, key: str, where: str) -> int:
    value = _get(obj, key, where)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}.{key}", f"expected an integer, got {value!r}")
    return value


def _get_number(obj: dict, key: str, where: str) -> float:
    value = _get(obj, key, where)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _get_str(obj: dict, key: str, where: str) -> str:
    value = _get(obj, key, where)
    if not isinstance(value, str):
        raise SchemaError(f"{where}.{key}", f"expected a string, got {value!r}")
    return value


def _get_bool(obj: dict, key: str, where: str) -> bool:
    value = _get(obj, key, where)
    if not isinstance(value, bool):
        raise SchemaError(f"{where}.{key}", f"expected a boolean, got {value!r}")
    return value


def _get_list(obj: dict, key: str, where: str) -> list:
    value = _get(obj, key, where)
    if not isinstance(value, list):
        raise SchemaError(f"{where}.{key}", f"expected an array, got {value!r}")
    return value


def _enum(kind: Any, raw: str, where: str) -> Any:
    try:
        return kind(raw)
    except ValueError:
        allowed = ", ".join(member.value for member in kind)
        raise SchemaError(where, f"expected one of [{allowed}], got {raw!r}") from None


# -- modality settings -------------------------------------------------------

def modalities_to_json(settings: ModalitySettings) -> dict:
    return {
        "visual": settings.visual,
        "auditory": settings.auditory,
        "speech": settings.speech,
        "haptic": settings.haptic,
    }


def modalities_from_json(obj: Any, where: str = "modalities") -> ModalitySettings:
    data = _require_dict(obj, where)
    return ModalitySettings(
        visual=_get_bool(data, "visual", where),
        auditory=_get_bool(data, "auditory", where),
        speech=_get_bool(data, "speech", where),
        haptic=_get_bool(data, "haptic", where),
    )


# -- alert specs and configs ---------------------------------------------------

def alert_spec_to_json(spec: AlertSpec) -> dict:
    return {
        "offset_before_end_s": spec.offset_before_end_s,
        "modalities": modalities_to_json(spec.modalities),
        "haptic_intensity": spec.haptic_intensity.value,
    }


def alert_spec_from_json(obj: Any, where: str = "alert") -> AlertSpec:
    data = _require_dict(obj, where)
    return AlertSpec(
        offset_before_end_s=_get_int(data, "offset_before_end_s", where),
        modalities=modalities_from_json(_get(data, "modalities", where), f"{where}.modalities"),
        haptic_intensity=_enum(
            HapticIntensity,
            _get_str(data, "haptic_intensity", where),
            f"{where}.haptic_intensity",
        ),
    )


def config_to_json(config: TimerConfig) -> dict:
    return {
        "duration_s": config.duration_s,
        "alerts": [alert_spec_to_json(a) for a in config.alerts],
    }


def config_from_json(obj: Any, where: str = "config") -> TimerConfig:
    data = _require_dict(obj, where)
    alerts = _get_list(data, "alerts", where)
    return TimerConfig(
        duration_s=_get_int(data, "duration_s", where),
        alerts=tuple(
            alert_spec_from_json(item, f"{where}.alerts[{i}]")
            for i, item in enumerate(alerts)
        ),
    )


# -- haptic patterns and alert events ------------------------------------------

def pattern_to_json(pattern: HapticPattern) -> dict:
    return {
        "intensity": pattern.intensity.value,
        "pulses": [[d, g] for d, g in pattern.pulses],
    }


def pattern_from_json(obj: Any, where: str = "pattern") -> HapticPattern:
    data = _require_dict(obj, where)
    raw_pulses = _get_list(data, "pulses", where)
    pulses = []
    for i, pair in enumerate(raw_pulses):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(x, bool) or not isinstance(x, int) for x in pair)
        ):
            raise SchemaError(f"{where}.pulses[{i}]", f"expected [duration_ms, gap_ms], got {pair!r}")
        pulses.append((pair[0], pair[1]))
    try:
        return HapticPattern(
            intensity=_enum(HapticIntensity, _get_str(data, "intensity", where), f"{where}.intensity"),
            pulses=tuple(pulses),
        )
    except ValueError as exc:
        raise SchemaError(where, str(exc)) from None


def alert_event_to_json(event: AlertEvent) -> dict:
    payload: Any
    if isinstance(event.payload, HapticPattern):
        payload = pattern_to_json(event.payload)
    else:
        payload = event.payload
    return {
        "alert_index": event.alert_index,
        "channel": event.channel.value,
        "payload": payload,
        "session_time_s": event.session_time_s,
    }


def alert_event_from_json(obj: Any, where: str = "event") -> AlertEvent:
    data = _require_dict(obj, where)
    channel = _enum(Channel, _get_str(data, "channel", where), f"{where}.channel")
    raw_payload = _get(data, "payload", where)
    payload: Any
    if channel is Channel.HAPTIC:
        payload = pattern_from_json(raw_payload, f"{where}.payload")
    elif isinstance(raw_payload, str):
        payload = raw_payload
    else:
        raise SchemaError(f"{where}.payload", f"expected a string, got {raw_payload!r}")
    return AlertEvent(
        alert_index=_get_int(data, "alert_index", where),
        channel=channel,
        payload=payload,
        session_time_s=_get_number(data, "session_time_s", where),
    )


# -- snapshots -------------------------------------------------------------------

def snapshot_to_json(snapshot: TimerSnapshot) -> dict:
    return {
        "phase": snapshot.phase.value,
        "elapsed_s": snapshot.elapsed_s,
        "remaining_s": snapshot.remaining_s,
        "display_mode": snapshot.display_mode.value,
        "fired_alert_ids": sorted(snapshot.fired_alert_ids),
        "config": config_to_json(snapshot.config),
    }


def snapshot_from_json(obj: Any, where: str = "snapshot") -> TimerSnapshot:
    data = _require_dict(obj, where)
    fired = _get_list(data, "fired_alert_ids", where)
    for i, value in enumerate(fired):
        if isinstance(value, bool) or not isinstance(value, int):
            raise SchemaError(f"{where}.fired_alert_ids[{i}]", f"expected an integer, got {value!r}")
    return TimerSnapshot(
        phase=_enum(TimerPhase, _get_str(data, "phase", where), f"{where}.phase"),
        elapsed_s=_get_number(data, "elapsed_s", where),
        remaining_s=_get_number(data, "remaining_s", where),
        display_mode=_enum(
            DisplayMode, _get_str(data, "display_mode", where), f"{where}.display_mode"
        ),
        fired_alert_ids=frozenset(fired),
        config=config_from_json(_get(data, "config", where), f"{where}.config"),
    )
