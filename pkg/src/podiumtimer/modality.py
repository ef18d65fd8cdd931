"""Alert modality dispatch: maps due alerts onto enabled output channels.

The engine knows four channels (visual, auditory, speech, haptic), each
independently toggleable. ``dispatch`` is a pure function from a due alert
plus settings to a list of channel events; delivery to actual outputs goes
through sinks behind a bounded, non-blocking hand-off (``SinkHub``) so a
slow or broken sink can never stall the timer.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Protocol, Union

if TYPE_CHECKING:
    from .scheduling import AlertSpec
    from .timer import DueAlert


class Channel(str, Enum):
    VISUAL = "visual"
    AUDITORY = "auditory"
    SPEECH = "speech"
    HAPTIC = "haptic"


class HapticIntensity(str, Enum):
    NORMAL = "normal"
    PROMINENT = "prominent"


@dataclass(frozen=True)
class ModalitySettings:
    """Four independent channel toggles. Any combination is legal."""

    visual: bool = True
    auditory: bool = True
    speech: bool = True
    haptic: bool = True

    def enabled_channels(self) -> tuple[Channel, ...]:
        order = (
            (Channel.VISUAL, self.visual),
            (Channel.AUDITORY, self.auditory),
            (Channel.SPEECH, self.speech),
            (Channel.HAPTIC, self.haptic),
        )
        return tuple(ch for ch, on in order if on)

    def channel_enabled(self, channel: Channel) -> bool:
        return getattr(self, channel.value)


ALL_MODALITIES = ModalitySettings(True, True, True, True)
NO_MODALITIES = ModalitySettings(False, False, False, False)


@dataclass(frozen=True)
class HapticPattern:
    """A pulse train: (duration_ms, gap_ms) pairs, gap after the last pulse 0."""

    intensity: HapticIntensity
    pulses: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        for duration_ms, gap_ms in self.pulses:
            if duration_ms <= 0:
                raise ValueError(f"pulse duration must be > 0 ms, got {duration_ms}")
            if gap_ms < 0:
                raise ValueError(f"pulse gap must be >= 0 ms, got {gap_ms}")

    def pulse_starts_s(self) -> tuple[float, ...]:
        """Start time of each pulse in seconds, relative to pattern onset."""
        starts = []
        t = 0.0
        for duration_ms, gap_ms in self.pulses:
            starts.append(t)
            t += (duration_ms + gap_ms) / 1000.0
        return tuple(starts)


# Pulse waveforms for the two intensities. The two levels only need to be
# clearly distinguishable; tune here if hardware feels different.
NORMAL_PATTERN = HapticPattern(HapticIntensity.NORMAL, ((200, 0),))
PROMINENT_PATTERN = HapticPattern(
    HapticIntensity.PROMINENT, ((200, 100), (200, 100), (200, 0))
)


def pattern_for(intensity: HapticIntensity) -> HapticPattern:
    if intensity is HapticIntensity.PROMINENT:
        return PROMINENT_PATTERN
    return NORMAL_PATTERN


# Payload ids understood by clients; see docs/protocol.md.
FLASH_REMINDER = "flash"
FLASH_TERMINAL = "flash-terminal"
TONE_REMINDER = "tone-single"
TONE_TERMINAL = "tone-double"


@dataclass(frozen=True)
class AlertEvent:
    """One alert on one channel. ``alert_index`` is -1 for the terminal alert."""

    alert_index: int
    channel: Channel
    payload: Union[str, HapticPattern]
    session_time_s: float


def speech_text(remaining_s: int) -> str:
    """Verbalize a remaining time that sits on the 5 second grid."""
    if remaining_s < 0:
        raise ValueError(f"remaining_s must be >= 0, got {remaining_s}")
    if remaining_s == 0:
        return "Time is up"
    minutes, seconds = divmod(remaining_s, 60)
    parts = []
    if minutes:
        parts.append(f"{minutes} minute" + ("s" if minutes != 1 else ""))
    if seconds:
        parts.append(f"{seconds} second" + ("s" if seconds != 1 else ""))
    return " ".join(parts) + " remaining"


def dispatch(
    due: "DueAlert",
    settings: ModalitySettings,
    spec: "AlertSpec | None",
    remaining_s: float,
) -> list[AlertEvent]:
    """Produce one event per enabled channel for a due alert.

    ``spec`` is None for the terminal alert, which behaves as an all-channel
    prominent alert. Per-alert channel masks AND with the global settings.
    Returns an empty list when nothing is enabled.
    """
    from .scheduling import quantize

    terminal = spec is None
    mask = ALL_MODALITIES if terminal else spec.modalities
    intensity = HapticIntensity.PROMINENT if terminal else spec.haptic_intensity
    spoken = speech_text(quantize(max(0.0, remaining_s)))
    session_time = due.session_time_s

    payloads: dict[Channel, Union[str, HapticPattern]] = {
        Channel.VISUAL: FLASH_TERMINAL if terminal else FLASH_REMINDER,
        Channel.AUDITORY: TONE_TERMINAL if terminal else TONE_REMINDER,
        Channel.SPEECH: spoken,
        Channel.HAPTIC: pattern_for(intensity),
    }

    events = []
    for channel in settings.enabled_channels():
        if not mask.channel_enabled(channel):
            continue
        events.append(
            AlertEvent(
                alert_index=due.index,
                channel=channel,
                payload=payloads[channel],
                session_time_s=session_time,
            )
        )
    return events


class AlertSink(Protocol):
    """Effectful consumer of alert events for one channel."""

    channel: Channel

    def deliver(self, event: AlertEvent) -> None:
        ...


DEFAULT_SINK_QUEUE_SIZE = 16


class _SinkWorker:
    """Owns one sink: a bounded queue, a worker thread, and drop/error counters."""

    def __init__(self, sink: AlertSink, queue_size: int):
        self.sink = sink
        self.dropped = 0
        self.errors = 0
        self._queue: deque[AlertEvent] = deque()
        self._capacity = queue_size
        self._cond = threading.Condition()
        self._closed = False
        self._thread = threading.Thread(
            target=self._run, name=f"sink-{sink.channel.value}", daemon=True
        )
        self._thread.start()

    def offer(self, event: AlertEvent) -> None:
        with self._cond:
            if self._closed:
                return
            if len(self._queue) >= self._capacity:
                self._queue.popleft()
                self.dropped += 1
            self._queue.append(event)
            self._cond.notify()

    def _run(self) -> None:
        while True:
            with self._cond:
                while not self._queue and not self._closed:
                    self._cond.wait()
                if self._closed and not self._queue:
                    return
                event = self._queue.popleft()
            try:
                self.sink.deliver(event)
            except Exception:
                self.errors += 1

    def close(self, timeout: float) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()
        # A stalled sink just gets abandoned; the thread is a daemon.
        self._thread.join(timeout=timeout)


@dataclass
class SinkStats:
    dropped: int = 0
    errors: int = 0


class SinkHub:
    """Fans alert events out to registered sinks without ever blocking.

    Each sink runs on its own thread behind a bounded drop-oldest queue,
    so delivery failures and stalls stay isolated from the caller and
    from other sinks.
    """

    def __init__(self, queue_size: int = DEFAULT_SINK_QUEUE_SIZE):
        self._queue_size = queue_size
        self._workers: list[_SinkWorker] = []

    def add(self, sink: AlertSink) -> None:
        self._workers.append(_SinkWorker(sink, self._queue_size))

    def offer(self, events: Iterable[AlertEvent]) -> None:
        for event in events:
            for worker in self._workers:
                if worker.sink.channel is event.channel:
                    worker.offer(event)

    def stats(self) -> dict[Channel, SinkStats]:
        out: dict[Channel, SinkStats] = {}
        for worker in self._workers:
            agg = out.setdefault(worker.sink.channel, SinkStats())
            agg.dropped += worker.dropped
            agg.errors += worker.errors
        return out

    def close(self, timeout: float = 1.0) -> None:
        for worker in self._workers:
            worker.close(timeout)
