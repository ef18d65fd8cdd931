"""Exception hierarchy shared across the engine, stores, and service."""

from __future__ import annotations


class PodiumTimerError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class InvalidConfig(PodiumTimerError):
    """A timer configuration violates a construction rule.

    The message names the first violated rule.
    """

    code = "invalid_config"


class IllegalTransition(PodiumTimerError):
    """A phase transition was requested that the state machine forbids."""

    code = "illegal_transition"

    def __init__(self, current: str, requested: str):
        super().__init__(f"cannot {requested} while {current}")
        self.current = current
        self.requested = requested


class InvalidDuration(PodiumTimerError):
    """No valid alert plan fits the given duration."""

    code = "invalid_duration"


class InvalidSpacing(PodiumTimerError):
    """Notification schedule spacing must be positive."""

    code = "invalid_spacing"


class PresetError(PodiumTimerError):
    code = "preset_error"


class DuplicateName(PresetError):
    code = "duplicate_name"


class InvalidName(PresetError):
    code = "invalid_name"


class NotFound(PresetError):
    code = "not_found"


class StorageFailure(PresetError):
    """Persisting the preset file failed; the previous file is untouched."""

    code = "storage_failure"


class ParseError(PresetError):
    """A preset file is structurally malformed. Carries field context."""

    code = "parse_error"


class UnsupportedVersion(PresetError):
    code = "unsupported_version"


class ProtocolError(PodiumTimerError):
    """A wire frame could not be parsed as a protocol message."""

    code = "protocol_error"


class ConnectError(PodiumTimerError):
    code = "connect_error"
