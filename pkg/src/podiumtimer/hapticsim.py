"""Simulator for haptics delivered through scheduled notifications.

Some wearable platforms refuse to play custom haptic patterns while their
screen is off; the workaround is to pre-schedule one local notification
per pulse and let each notification carry a canned buzz. This module
compiles an alert plan into that notification schedule and then measures
how badly delivery jitter degrades the intended pattern timing.

Everything here is deterministic for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidConfig, InvalidSpacing
from .modality import pattern_for
from .scheduling import AlertPlan, validate_plan

# Platforms throttle back-to-back notifications; entries closer than this
# are merged at compile time.
DEFAULT_MIN_SPACING_S = 0.5

# Two buzzes closer than this read as one to the wearer.
PERCEPTUAL_MERGE_THRESHOLD_S = 0.08


@dataclass(frozen=True)
class ScheduleEntry:
    """One notification: when it fires and which alert's pattern it plays.

    ``merged_pulses`` counts pulses that were folded into this entry
    because they violated the minimum spacing.
    """

    fire_at_s: float
    pattern_slot: int
    merged_pulses: int = 0


@dataclass(frozen=True)
class NotificationSchedule:
    entries: tuple[ScheduleEntry, ...]
    min_spacing_s: float

    @property
    def coalesced_count(self) -> int:
        return sum(e.merged_pulses for e in self.entries)

    def fire_times(self) -> list[float]:
        return [e.fire_at_s for e in self.entries]


class JitterKind(str, Enum):
    NONE = "none"
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class JitterModel:
    """Delivery delay model. Delays never go negative: notifications are
    late or on time, never early."""

    kind: JitterKind = JitterKind.NONE
    max_delay_s: float = 0.0
    mean_s: float = 0.0
    std_s: float = 0.0
    seed: int = 0

    @classmethod
    def none(cls) -> "JitterModel":
        return cls(kind=JitterKind.NONE)

    @classmethod
    def uniform(cls, max_delay_s: float, seed: int = 0) -> "JitterModel":
        if max_delay_s < 0:
            raise ValueError(f"max delay must be >= 0, got {max_delay_s}")
        return cls(kind=JitterKind.UNIFORM, max_delay_s=max_delay_s, seed=seed)

    @classmethod
    def gaussian(cls, mean_s: float, std_s: float, seed: int = 0) -> "JitterModel":
        if std_s < 0:
            raise ValueError(f"std must be >= 0, got {std_s}")
        return cls(kind=JitterKind.GAUSSIAN, mean_s=mean_s, std_s=std_s, seed=seed)

    def delays(self, count: int) -> list[float]:
        if self.kind is JitterKind.NONE:
            return [0.0] * count
        rng = random.Random(self.seed)
        if self.kind is JitterKind.UNIFORM:
            return [rng.uniform(0.0, self.max_delay_s) for _ in range(count)]
        return [max(0.0, rng.gauss(self.mean_s, self.std_s)) for _ in range(count)]


@dataclass(frozen=True)
class FidelityReport:
    max_abs_deviation_s: float
    mean_abs_deviation_s: float
    order_violations: int
    coalesced_count: int

    def to_json(self) -> dict:
        return {
            "max_abs_deviation_s": self.max_abs_deviation_s,
            "mean_abs_deviation_s": self.mean_abs_deviation_s,
            "order_violations": self.order_violations,
            "coalesced_count": self.coalesced_count,
        }


def compile_schedule(
    plan: AlertPlan, min_spacing_s: float = DEFAULT_MIN_SPACING_S
) -> NotificationSchedule:
    """Expand each alert's haptic pattern into timed notification entries.

    Pulses land at (duration - offset) + pulse start. Runs of pulses whose
    original gaps fall under ``min_spacing_s`` collapse into a single entry
    that keeps the first pulse's timestamp (onset timing dominates how a
    buzz is perceived).
    """
    if min_spacing_s <= 0:
        raise InvalidSpacing(f"min spacing must be > 0, got {min_spacing_s}")
    report = validate_plan(plan)
    if not report.ok:
        raise InvalidConfig(str(report.violations[0]))

    raw: list[tuple[float, int]] = []
    for slot, alert in enumerate(plan.alerts):
        onset = float(plan.duration_s - alert.offset_before_end_s)
        for start in pattern_for(alert.haptic_intensity).pulse_starts_s():
            raw.append((onset + start, slot))
    raw.sort()

    entries: list[ScheduleEntry] = []
    previous_time: float | None = None
    for fire_at, slot in raw:
        if previous_time is not None and fire_at - previous_time < min_spacing_s:
            last = entries[-1]
            entries[-1] = ScheduleEntry(
                fire_at_s=last.fire_at_s,
                pattern_slot=last.pattern_slot,
                merged_pulses=last.merged_pulses + 1,
            )
        else:
            entries.append(ScheduleEntry(fire_at_s=fire_at, pattern_slot=slot))
        previous_time = fire_at
    return NotificationSchedule(entries=tuple(entries), min_spacing_s=min_spacing_s)


def simulate(
    schedule: NotificationSchedule, jitter: JitterModel
) -> tuple[list[float], FidelityReport]:
    """Apply delivery jitter and score the result against intended times."""
    intended = schedule.fire_times()
    delays = jitter.delays(len(intended))
    delivered = [t + d for t, d in zip(intended, delays)]

    deviations = [abs(d - t) for d, t in zip(delivered, intended)]
    order_violations = sum(
        1
        for i in range(len(delivered))
        for j in range(i + 1, len(delivered))
        if delivered[i] > delivered[j]
    )
    arrival_order = sorted(delivered)
    coalesced = sum(
        1
        for a, b in zip(arrival_order, arrival_order[1:])
        if b - a < PERCEPTUAL_MERGE_THRESHOLD_S
    )
    report = FidelityReport(
        max_abs_deviation_s=max(deviations, default=0.0),
        mean_abs_deviation_s=(sum(deviations) / len(deviations)) if deviations else 0.0,
        order_violations=order_violations,
        coalesced_count=coalesced,
    )
    return delivered, report
