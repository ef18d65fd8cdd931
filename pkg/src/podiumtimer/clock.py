"""Clock abstraction so timing logic can run against real or simulated time.

Timer state is always derived from timestamps taken from one of these
clocks, never from counting ticks, so any component that accepts a Clock
can be driven deterministically in tests (and by the CLI's fake-time mode).
"""

from __future__ import annotations

import time
from typing import Protocol, runtime_checkable


@runtime_checkable
class Clock(Protocol):
    """Source of non-decreasing timestamps in seconds."""

    def now(self) -> float:
        ...


class MonotonicClock:
    """Production clock backed by time.monotonic()."""

    def now(self) -> float:
        return time.monotonic()


class ManualClock:
    """Programmatically advanced clock for deterministic runs.

    Refuses to move backwards, matching the monotonic contract.
    """

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds < 0:
            raise ValueError(f"cannot advance a monotonic clock by {seconds}")
        self._now += seconds
        return self._now

    def set_time(self, value: float) -> float:
        if value < self._now:
            raise ValueError(f"cannot move clock backwards from {self._now} to {value}")
        self._now = float(value)
        return self._now
