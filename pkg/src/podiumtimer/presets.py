"""Named timer configurations with atomic JSON file persistence.

The store is a single UTF-8 JSON document:

    {"version": 1, "presets": [{"id", "name", "duration_s", "alerts": [...],
                                "created_at", "updated_at"}, ...]}

Writes go to a temp file in the same directory which is then renamed over
the target, so a crash mid-save leaves the previous file intact. Mutations
are committed to memory only after the file write succeeds. Presets that
fail validation on load are skipped and reported; the rest still load.
"""

from __future__ import annotations

import json
import os
import tempfile
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

try:
    import fcntl
except ImportError:  # non-POSIX; the atomic rename still protects readers
    fcntl = None  # type: ignore[assignment]

from .errors import (
    DuplicateName,
    InvalidConfig,
    InvalidName,
    NotFound,
    ParseError,
    StorageFailure,
    UnsupportedVersion,
)
from .serialize import SchemaError, _get_list, _get_str, _require_dict, config_from_json, config_to_json
from .timer import TimerConfig, validate_config

FORMAT_VERSION = 1
MAX_NAME_LENGTH = 64

_STORE_KEYS = {"version", "presets"}
_PRESET_KEYS = {"id", "name", "duration_s", "alerts", "created_at", "updated_at"}


@dataclass(frozen=True)
class Preset:
    id: str
    name: str
    config: TimerConfig
    created_at: datetime
    updated_at: datetime


def preset_to_json(preset: Preset) -> dict:
    return {
        "id": preset.id,
        "name": preset.name,
        "duration_s": preset.config.duration_s,
        "alerts": config_to_json(preset.config)["alerts"],
        "created_at": preset.created_at.isoformat(),
        "updated_at": preset.updated_at.isoformat(),
    }


def _timestamp_from(raw: str, where: str) -> datetime:
    try:
        parsed = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        raise SchemaError(where, f"expected an RFC 3339 timestamp, got {raw!r}") from None
    if parsed.tzinfo is None:
        raise SchemaError(where, f"timestamp {raw!r} is missing a UTC offset")
    return parsed


def preset_from_json(obj: Any, where: str = "preset") -> Preset:
    data = _require_dict(obj, where)
    unknown = set(data) - _PRESET_KEYS
    if unknown:
        raise SchemaError(where, f"unknown fields: {sorted(unknown)}")
    config = config_from_json(
        {"duration_s": data.get("duration_s"), "alerts": data.get("alerts", [])}, where
    )
    name = _get_str(data, "name", where)
    return Preset(
        id=_get_str(data, "id", where),
        name=name,
        config=config,
        created_at=_timestamp_from(_get_str(data, "created_at", where), f"{where}.created_at"),
        updated_at=_timestamp_from(_get_str(data, "updated_at", where), f"{where}.updated_at"),
    )


def _check_name(name: str) -> str:
    if not isinstance(name, str) or not name.strip():
        raise InvalidName("preset name must be a non-empty string")
    if len(name) > MAX_NAME_LENGTH:
        raise InvalidName(f"preset name must be at most {MAX_NAME_LENGTH} characters")
    return name


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class PresetStore:
    """All known presets, optionally bound to a file path.

    With ``path=None`` the store lives purely in memory, which the tests
    and the service's ephemeral mode use.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self.presets: dict[str, Preset] = {}
        self.load_issues: list[str] = []

    # -- loading -------------------------------------------------------------

    @classmethod
    def load_file(cls, path: Path | str) -> "PresetStore":
        """Read a store; a missing file is an empty version-1 store."""
        store = cls(path)
        assert store.path is not None
        if not store.path.exists():
            return store
        try:
            raw = store.path.read_text(encoding="utf-8")
            document = json.loads(raw)
        except OSError as exc:
            raise StorageFailure(f"cannot read {store.path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{store.path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
        store._absorb(document)
        return store

    def _absorb(self, document: Any) -> None:
        try:
            data = _require_dict(document, "store")
            unknown = set(data) - _STORE_KEYS
            if unknown:
                raise SchemaError("store", f"unknown fields: {sorted(unknown)}")
            version = data.get("version")
            if isinstance(version, bool) or not isinstance(version, int):
                raise SchemaError("store.version", f"expected an integer, got {version!r}")
            if version != FORMAT_VERSION:
                raise UnsupportedVersion(
                    f"preset file version {version} is not supported (expected {FORMAT_VERSION})"
                )
            items = _get_list(data, "presets", "store")
        except SchemaError as exc:
            raise ParseError(str(exc)) from None

        seen_names: set[str] = set()
        for i, item in enumerate(items):
            where = f"presets[{i}]"
            try:
                preset = preset_from_json(item, where)
            except SchemaError as exc:
                self.load_issues.append(str(exc))
                continue
            problem = validate_config(preset.config)
            if problem is not None:
                self.load_issues.append(f"{where} ({preset.name!r}): {problem}")
                continue
            if preset.id in self.presets:
                self.load_issues.append(f"{where}: duplicate id {preset.id!r}")
                continue
            if preset.name.lower() in seen_names:
                self.load_issues.append(f"{where}: duplicate name {preset.name!r}")
                continue
            seen_names.add(preset.name.lower())
            self.presets[preset.id] = preset

    # -- queries ------------------------------------------------------------

    def list(self) -> list[Preset]:
        return sorted(self.presets.values(), key=lambda p: p.name.lower())

    def get(self, preset_id: str) -> Preset:
        try:
            return self.presets[preset_id]
        except KeyError:
            raise NotFound(f"no preset with id {preset_id!r}") from None

    def find_by_name(self, name: str) -> Preset | None:
        lowered = name.lower()
        for preset in self.presets.values():
            if preset.name.lower() == lowered:
                return preset
        return None

    # -- mutations (persisted atomically, memory committed after the write) --

    def save(self, name: str, config: TimerConfig) -> Preset:
        _check_name(name)
        problem = validate_config(config)
        if problem is not None:
            raise InvalidConfig(problem)
        if self.find_by_name(name) is not None:
            raise DuplicateName(f"a preset named {name!r} already exists")
        now = _utcnow()
        preset = Preset(id=str(uuid.uuid4()), name=name, config=config, created_at=now, updated_at=now)
        updated = dict(self.presets)
        updated[preset.id] = preset
        self._commit(updated)
        return preset

    def delete(self, preset_id: str) -> None:
        self.get(preset_id)
        updated = dict(self.presets)
        del updated[preset_id]
        self._commit(updated)

    def rename(self, preset_id: str, new_name: str) -> Preset:
        _check_name(new_name)
        current = self.get(preset_id)
        clash = self.find_by_name(new_name)
        if clash is not None and clash.id != preset_id:
            raise DuplicateName(f"a preset named {new_name!r} already exists")
        renamed = Preset(
            id=current.id,
            name=new_name,
            config=current.config,
            created_at=current.created_at,
            updated_at=_utcnow(),
        )
        updated = dict(self.presets)
        updated[preset_id] = renamed
        self._commit(updated)
        return renamed

    # -- persistence --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "presets": [preset_to_json(p) for p in self.list()],
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":")).encode("utf-8")

    def _commit(self, updated: dict[str, Preset]) -> None:
        previous = self.presets
        self.presets = updated
        try:
            self._persist()
        except StorageFailure:
            self.presets = previous
            raise

    def _persist(self) -> None:
        if self.path is None:
            return
        document = json.dumps(self.to_json(), indent=2) + "\n"
        lock_handle = None
        tmp_name = None
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            if fcntl is not None:
                lock_handle = open(self.path.with_suffix(self.path.suffix + ".lock"), "w")
                fcntl.flock(lock_handle, fcntl.LOCK_EX)
            with tempfile.NamedTemporaryFile(
                "w",
                encoding="utf-8",
                dir=self.path.parent,
                prefix=self.path.name + ".",
                suffix=".tmp",
                delete=False,
            ) as tmp:
                tmp_name = tmp.name
                tmp.write(document)
                tmp.flush()
                os.fsync(tmp.fileno())
            os.replace(tmp_name, self.path)
            tmp_name = None
        except OSError as exc:
            raise StorageFailure(f"cannot write {self.path}: {exc}") from exc
        finally:
            if tmp_name is not None:
                try:
                    os.unlink(tmp_name)
                except OSError:
                    pass
            if lock_handle is not None:
                if fcntl is not None:
                    fcntl.flock(lock_handle, fcntl.LOCK_UN)
                lock_handle.close()


def default_presets_path() -> Path:
    """Platform user-data location, overridable with PODIUMTIMER_PRESETS."""
    env = os.environ.get("PODIUMTIMER_PRESETS")
    if env:
        return Path(env)
    xdg = os.environ.get("XDG_DATA_HOME")
    base = Path(xdg) if xdg else Path.home() / ".local" / "share"
    return base / "podiumtimer" / "presets.json"
