"""Alert plan construction and validation.

An alert plan is an ordered list of 1 to 3 reminders, each expressed as an
offset before the end of the session. Offsets live on a 5 second grid,
must fall strictly inside the session, and must strictly decrease in list
order (reminder 1 is the earliest cue, so it has the largest offset).

Plans are usually seeded from fraction-of-duration defaults (1/2, 1/6,
1/18 of the total) and then edited; both paths funnel through the same
validation so the engine, the CLI, and the service agree on what is legal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

from .errors import InvalidDuration
from .modality import HapticIntensity, ModalitySettings

GRID_S = 5

# Offsets for n defaults are the first n entries scaled by duration.
DEFAULT_FRACTIONS = {
    1: (1 / 6,),
    2: (1 / 2, 1 / 6),
    3: (1 / 2, 1 / 6, 1 / 18),
}

MIN_ALERTS = 1
MAX_ALERTS = 3


@dataclass(frozen=True)
class AlertSpec:
    """One reminder: when it fires (before the end) and how it presents."""

    offset_before_end_s: int
    modalities: ModalitySettings = field(default_factory=ModalitySettings)
    haptic_intensity: HapticIntensity = HapticIntensity.NORMAL


@dataclass(frozen=True)
class AlertPlan:
    """An ordered reminder list plus the session duration it was built for."""

    duration_s: int
    alerts: tuple[AlertSpec, ...]

    def offsets(self) -> tuple[int, ...]:
        return tuple(a.offset_before_end_s for a in self.alerts)


class Rule(str, Enum):
    OUT_OF_RANGE = "OutOfRange"
    OFF_GRID = "OffGrid"
    NOT_DECREASING = "NotDecreasing"
    BAD_COUNT = "BadCount"


@dataclass(frozen=True)
class Violation:
    """One broken rule. ``index`` is None for plan-level rules."""

    rule: Rule
    index: int | None
    message: str

    def __str__(self) -> str:
        where = "plan" if self.index is None else f"alert {self.index + 1}"
        return f"{self.rule.value} at {where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def quantize(seconds: float) -> int:
    """Round to the nearest 5 second grid point; exact midpoints round up."""
    if seconds < 0:
        raise ValueError(f"seconds must be >= 0, got {seconds}")
    return int(math.floor(seconds / GRID_S + 0.5)) * GRID_S


def validate_plan(plan: AlertPlan) -> ValidationReport:
    """Check every rule and report the complete list of violations.

    Never raises; an empty report means the plan is acceptable.
    """
    violations: list[Violation] = []
    n = len(plan.alerts)
    if not MIN_ALERTS <= n <= MAX_ALERTS:
        violations.append(
            Violation(
                Rule.BAD_COUNT,
                None,
                f"plan must have {MIN_ALERTS} to {MAX_ALERTS} alerts, got {n}",
            )
        )
    duration = plan.duration_s
    previous: int | None = None
    for i, alert in enumerate(plan.alerts):
        offset = alert.offset_before_end_s
        if not 0 < offset < duration:
            violations.append(
                Violation(
                    Rule.OUT_OF_RANGE,
                    i,
                    f"offset {offset}s must be > 0 and < duration {duration}s",
                )
            )
        if offset % GRID_S != 0:
            violations.append(
                Violation(
                    Rule.OFF_GRID, i, f"offset {offset}s is not a multiple of {GRID_S}s"
                )
            )
        if previous is not None and offset >= previous:
            violations.append(
                Violation(
                    Rule.NOT_DECREASING,
                    i,
                    f"offset {offset}s must be smaller than the previous {previous}s",
                )
            )
        previous = offset
    return ValidationReport(tuple(violations))


def _fit_offsets(candidates: Sequence[int], duration_s: int, what: str) -> list[int]:
    """Clamp candidate offsets into range and resolve collisions.

    Candidates arrive largest-first. The last (smallest) offset is the most
    safety-critical cue, so collisions push earlier alerts upward in 5 s
    steps rather than moving the final warning.
    """
    low, high = GRID_S, duration_s - GRID_S
    if high < low:
        raise InvalidDuration(
            f"duration {duration_s}s leaves no room for any alert offset"
        )
    fitted = [min(max(c, low), high) for c in candidates]
    for i in range(len(fitted) - 2, -1, -1):
        fitted[i] = max(fitted[i], fitted[i + 1] + GRID_S)
    if fitted and fitted[0] > high:
        raise InvalidDuration(
            f"duration {duration_s}s is too short for {len(fitted)} distinct {what}"
        )
    return fitted


def default_plan(duration_s: int, n_alerts: int) -> AlertPlan:
    """Build the adaptive percentage-based default plan.

    Offsets are fractions of the duration quantized to the grid, all
    modalities enabled, and the final alert promoted to a prominent haptic
    pattern. Raises InvalidDuration when no n distinct grid offsets fit.
    """
    if duration_s < GRID_S or duration_s % GRID_S != 0:
        raise InvalidDuration(
            f"duration must be a multiple of {GRID_S}s and >= {GRID_S}s, got {duration_s}"
        )
    if n_alerts not in DEFAULT_FRACTIONS:
        raise InvalidDuration(f"number of alerts must be 1 to 3, got {n_alerts}")
    candidates = [quantize(f * duration_s) for f in DEFAULT_FRACTIONS[n_alerts]]
    offsets = _fit_offsets(candidates, duration_s, "default offsets")
    alerts = tuple(
        AlertSpec(
            offset_before_end_s=offset,
            haptic_intensity=(
                HapticIntensity.PROMINENT if i == n_alerts - 1 else HapticIntensity.NORMAL
            ),
        )
        for i, offset in enumerate(offsets)
    )
    return AlertPlan(duration_s=duration_s, alerts=alerts)


def rescale_plan(plan: AlertPlan, new_duration_s: int) -> AlertPlan:
    """Scale a plan to a new duration, preserving modalities and intensities."""
    if new_duration_s < GRID_S or new_duration_s % GRID_S != 0:
        raise InvalidDuration(
            f"duration must be a multiple of {GRID_S}s and >= {GRID_S}s, got {new_duration_s}"
        )
    ratio = new_duration_s / plan.duration_s
    candidates = [quantize(a.offset_before_end_s * ratio) for a in plan.alerts]
    offsets = _fit_offsets(candidates, new_duration_s, "rescaled offsets")
    alerts = tuple(
        replace(alert, offset_before_end_s=offset)
        for alert, offset in zip(plan.alerts, offsets)
    )
    return AlertPlan(duration_s=new_duration_s, alerts=alerts)
