"""Client-side mirror of session state.

A view is a pure reduction of the server's event stream: it never guesses
and never writes engine state, it only reflects what the latest events
said. The interactive CLI uses it to know the current phase; tests use it
to check that every client converges on identical state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .modality import ModalitySettings
from .presets import Preset
from .protocol import (
    Ack,
    AlertFired,
    Error,
    Event,
    PresetList,
    Snapshot,
    StateChanged,
    Tick,
    Welcome,
)
from .timer import DisplayMode, TimerConfig, TimerPhase


@dataclass
class ClientView:
    client_id: str | None = None
    seq: int = 0
    phase: TimerPhase = TimerPhase.IDLE
    elapsed_s: float = 0.0
    remaining_s: float = 0.0
    display_mode: DisplayMode = DisplayMode.COUNTDOWN
    config: TimerConfig | None = None
    modalities: ModalitySettings = field(default_factory=ModalitySettings)
    fired: frozenset[int] = frozenset()
    presets: tuple[Preset, ...] = ()

    def apply(self, event: Event) -> bool:
        """Fold one event in. Returns False for stale events, which are ignored."""
        if isinstance(event, (Error, Ack)):
            return True
        if isinstance(event, Welcome):
            self.client_id = event.client_id
            self.seq = event.seq
            self._absorb_snapshot(event.snapshot)
            self.modalities = event.modalities
            self.presets = event.presets
            return True
        if event.seq <= self.seq:
            return False
        self.seq = event.seq
        if isinstance(event, Snapshot):
            self._absorb_snapshot(event.snapshot)
            self.modalities = event.modalities
        elif isinstance(event, Tick):
            self.elapsed_s = event.elapsed_s
            self.remaining_s = event.remaining_s
        elif isinstance(event, AlertFired):
            if event.alert_index >= 0:
                self.fired = self.fired | {event.alert_index}
        elif isinstance(event, StateChanged):
            self.phase = event.phase
            if event.phase is TimerPhase.IDLE:
                self.fired = frozenset()
        elif isinstance(event, PresetList):
            self.presets = event.presets
        return True

    def _absorb_snapshot(self, snapshot) -> None:
        self.phase = snapshot.phase
        self.elapsed_s = snapshot.elapsed_s
        self.remaining_s = snapshot.remaining_s
        self.display_mode = snapshot.display_mode
        self.config = snapshot.config
        self.fired = frozenset(snapshot.fired_alert_ids)

    def state_key(self) -> tuple:
        """Comparable digest of everything a client knows; equal across
        converged clients."""
        return (
            self.seq,
            self.phase,
            round(self.elapsed_s, 9),
            round(self.remaining_s, 9),
            self.display_mode,
            self.config,
            self.modalities,
            self.fired,
            tuple(p.id for p in self.presets),
        )
