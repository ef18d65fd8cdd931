"""Drift-free timer state machine.

Elapsed time is always recomputed from clock timestamps captured at phase
transitions, never by decrementing a counter, so tick cadence is purely a
reporting concern: two tick schedules covering the same span see the same
elapsed time and fire the same alerts. Alerts that were missed during a
stall fire late, in order, exactly once.

All session mutations are expected to happen on one logical owner (see the
session service); snapshots are immutable values safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import IllegalTransition, InvalidConfig
from .scheduling import (
    GRID_S,
    MAX_ALERTS,
    MIN_ALERTS,
    AlertPlan,
    AlertSpec,
    validate_plan,
)

# The implicit time-up alert; always present beyond the 1-3 configured ones.
TERMINAL_INDEX = -1

_EPS = 1e-9


class TimerPhase(str, Enum):
    IDLE = "idle"
    RUNNING = "running"
    PAUSED = "paused"
    FINISHED = "finished"


class DisplayMode(str, Enum):
    COUNTDOWN = "countdown"
    COUNT_UP = "countup"


@dataclass(frozen=True)
class TimerConfig:
    """Total session length plus its ordered alert plan."""

    duration_s: int
    alerts: tuple[AlertSpec, ...]

    @property
    def plan(self) -> AlertPlan:
        return AlertPlan(duration_s=self.duration_s, alerts=self.alerts)


@dataclass(frozen=True)
class DueAlert:
    """An alert that has come due. ``index`` is TERMINAL_INDEX for time-up."""

    index: int
    offset_before_end_s: int
    session_time_s: float

    @property
    def is_terminal(self) -> bool:
        return self.index == TERMINAL_INDEX


@dataclass(frozen=True)
class TimerSnapshot:
    phase: TimerPhase
    elapsed_s: float
    remaining_s: float
    display_mode: DisplayMode
    fired_alert_ids: frozenset[int]
    config: TimerConfig


def validate_config(config: TimerConfig) -> str | None:
    """Return the first violated construction rule, or None if acceptable."""
    if config.duration_s < GRID_S:
        return f"duration must be at least {GRID_S}s, got {config.duration_s}s"
    if config.duration_s % GRID_S != 0:
        return f"duration must be a multiple of {GRID_S}s, got {config.duration_s}s"
    n = len(config.alerts)
    if not MIN_ALERTS <= n <= MAX_ALERTS:
        return f"plan must have {MIN_ALERTS} to {MAX_ALERTS} alerts, got {n}"
    report = validate_plan(config.plan)
    if not report.ok:
        return str(report.violations[0])
    return None


def create(config: TimerConfig) -> "TimerSession":
    """Build an idle session, rejecting configs that break any rule."""
    problem = validate_config(config)
    if problem is not None:
        raise InvalidConfig(problem)
    return TimerSession(config)


class TimerSession:
    """One timer run. Use :func:`create` so the config is checked."""

    def __init__(self, config: TimerConfig, display_mode: DisplayMode = DisplayMode.COUNTDOWN):
        self.config = config
        self.display_mode = display_mode
        self.phase = TimerPhase.IDLE
        self._fired: set[int] = set()
        self._accumulated = 0.0   # elapsed across completed running spans
        self._span_start: float | None = None  # clock time the current span began

    # -- state inspection ---------------------------------------------------

    def elapsed_s(self, now: float) -> float:
        if self.phase is TimerPhase.RUNNING:
            assert self._span_start is not None
            span = max(0.0, now - self._span_start)
            return min(self._accumulated + span, float(self.config.duration_s))
        return self._accumulated

    def remaining_s(self, now: float) -> float:
        return self.config.duration_s - self.elapsed_s(now)

    def snapshot(self, now: float) -> TimerSnapshot:
        elapsed = self.elapsed_s(now)
        return TimerSnapshot(
            phase=self.phase,
            elapsed_s=elapsed,
            remaining_s=self.config.duration_s - elapsed,
            display_mode=self.display_mode,
            fired_alert_ids=frozenset(self._fired),
            config=self.config,
        )

    def seconds_until_next_due(self, now: float) -> float | None:
        """Time until the next unfired alert (terminal included); None unless running."""
        if self.phase is not TimerPhase.RUNNING:
            return None
        target = float(self.config.duration_s)
        for i, alert in enumerate(self.config.alerts):
            if i not in self._fired:
                target = self.config.duration_s - alert.offset_before_end_s
                break
        return max(0.0, target - self.elapsed_s(now))

    # -- transitions ----------------------------------------------------------

    def start(self, now: float) -> TimerSnapshot:
        self._require(TimerPhase.IDLE, "start")
        self.phase = TimerPhase.RUNNING
        self._accumulated = 0.0
        self._span_start = now
        self._fired.clear()
        return self.snapshot(now)

    def pause(self, now: float) -> TimerSnapshot:
        self._require(TimerPhase.RUNNING, "pause")
        self._accumulated = self.elapsed_s(now)
        self._span_start = None
        self.phase = TimerPhase.PAUSED
        return self.snapshot(now)

    def resume(self, now: float) -> TimerSnapshot:
        self._require(TimerPhase.PAUSED, "resume")
        self.phase = TimerPhase.RUNNING
        self._span_start = now
        return self.snapshot(now)

    def stop(self, now: float) -> TimerSnapshot:
        if self.phase is TimerPhase.IDLE:
            raise IllegalTransition(self.phase.value, "stop")
        self.phase = TimerPhase.IDLE
        self._accumulated = 0.0
        self._span_start = None
        self._fired.clear()
        return self.snapshot(now)

    def _require(self, expected: TimerPhase, requested: str) -> None:
        if self.phase is not expected:
            raise IllegalTransition(self.phase.value, requested)

    # -- the trigger point ------------------------------------------------------

    def tick(self, now: float) -> tuple[TimerSnapshot, list[DueAlert]]:
        """Recompute elapsed time and collect alerts that have come due.

        Alerts whose offset is at or past the current remaining time fire
        exactly once, ordered by descending offset, so a stall releases all
        missed cues in session order. Reaching zero remaining flips the
        phase to finished and appends the terminal alert last. Ticks in any
        other phase return the unchanged snapshot and no alerts.
        """
        if self.phase is not TimerPhase.RUNNING:
            return self.snapshot(now), []
        duration = self.config.duration_s
        elapsed = self.elapsed_s(now)
        remaining = duration - elapsed
        due: list[DueAlert] = []
        for i, alert in enumerate(self.config.alerts):
            offset = alert.offset_before_end_s
            if i not in self._fired and offset >= remaining:
                self._fired.add(i)
                due.append(
                    DueAlert(
                        index=i,
                        offset_before_end_s=offset,
                        session_time_s=duration - remaining,
                    )
                )
        if remaining <= 0.0:
            self.phase = TimerPhase.FINISHED
            self._accumulated = float(duration)
            self._span_start = None
            due.append(
                DueAlert(
                    index=TERMINAL_INDEX,
                    offset_before_end_s=0,
                    session_time_s=float(duration),
                )
            )
        return self.snapshot(now), due


def format_mm_ss(total_seconds: int) -> str:
    """Render whole seconds as MM:SS; the minute field grows past 99:59."""
    if total_seconds < 0:
        total_seconds = 0
    minutes, seconds = divmod(total_seconds, 60)
    return f"{minutes:02d}:{seconds:02d}"


def display_value(snapshot: TimerSnapshot) -> str:
    """Countdown rounds remaining time up; count-up rounds elapsed down.

    That pairing keeps the two displayed values summing to the duration
    rather than duration plus one.
    """
    if snapshot.display_mode is DisplayMode.COUNT_UP:
        return format_mm_ss(int(math.floor(snapshot.elapsed_s + _EPS)))
    return format_mm_ss(int(math.ceil(snapshot.remaining_s - _EPS)))
