"""Embedded engine loop: drive one session to completion without a service.

Used by the CLI's ``run`` subcommand and by tests. The loop wakes at tick
boundaries and at upcoming alert times, so alerts land on their exact
session times even at slow tick rates. With a ManualClock the loop jumps
straight to the next wakeup instead of sleeping, which replays a whole
session in microseconds while producing the same transcript as real time.
"""

from __future__ import annotations

import time
from typing import Callable

from .clock import Clock, ManualClock, MonotonicClock
from .modality import AlertEvent, ModalitySettings, SinkHub, dispatch
from .timer import (
    DisplayMode,
    DueAlert,
    TimerConfig,
    TimerPhase,
    TimerSnapshot,
    create,
)

_TIME_EPS = 1e-6

OnTick = Callable[[TimerSnapshot], None]
OnAlert = Callable[[DueAlert, list[AlertEvent], TimerSnapshot], None]
OnPhase = Callable[[TimerSnapshot], None]


class TimerRunner:
    def __init__(
        self,
        config: TimerConfig,
        settings: ModalitySettings | None = None,
        clock: Clock | None = None,
        tick_rate_hz: float = 1.0,
        display_mode: DisplayMode = DisplayMode.COUNTDOWN,
        hub: SinkHub | None = None,
        on_tick: OnTick | None = None,
        on_alert: OnAlert | None = None,
        on_phase: OnPhase | None = None,
    ):
        if tick_rate_hz <= 0:
            raise ValueError(f"tick rate must be > 0, got {tick_rate_hz}")
        self.config = config
        self.settings = settings if settings is not None else ModalitySettings()
        self.clock = clock if clock is not None else MonotonicClock()
        self.tick_rate_hz = tick_rate_hz
        self.display_mode = display_mode
        self.hub = hub
        self.on_tick = on_tick
        self.on_alert = on_alert
        self.on_phase = on_phase

    def run(self) -> TimerSnapshot:
        session = create(self.config)
        session.display_mode = self.display_mode
        interval = 1.0 / self.tick_rate_hz
        manual = isinstance(self.clock, ManualClock)

        snapshot = session.start(self.clock.now())
        if self.on_phase:
            self.on_phase(snapshot)
        next_tick = self.clock.now() + interval

        while session.phase is TimerPhase.RUNNING:
            now = self.clock.now()
            until_due = session.seconds_until_next_due(now)
            wake = next_tick
            if until_due is not None:
                wake = min(wake, now + until_due)
            if manual:
                self.clock.set_time(max(wake, now))  # type: ignore[attr-defined]
            elif wake > now:
                time.sleep(wake - now)

            now = self.clock.now()
            snapshot, due_alerts = session.tick(now)
            if now >= next_tick - _TIME_EPS:
                if self.on_tick:
                    self.on_tick(snapshot)
                while next_tick <= now + _TIME_EPS:
                    next_tick += interval
            for due in due_alerts:
                spec = None if due.is_terminal else self.config.alerts[due.index]
                events = dispatch(due, self.settings, spec, snapshot.remaining_s)
                if self.hub is not None:
                    self.hub.offer(events)
                if self.on_alert:
                    self.on_alert(due, events, snapshot)
            if snapshot.phase is TimerPhase.FINISHED and self.on_phase:
                self.on_phase(snapshot)
        return snapshot
