"""Presentation timer engine with multimodal alerts and session sync.

The pieces, bottom up: a drift-free timer state machine (:mod:`.timer`),
alert plan construction and validation (:mod:`.scheduling`), dispatch of
due alerts onto toggleable channels (:mod:`.modality`), persistent named
presets (:mod:`.presets`), a simulator for notification-scheduled haptics
(:mod:`.hapticsim`), and a WebSocket session service speaking the JSON
protocol in :mod:`.protocol` to any number of clients (:mod:`.service`,
:mod:`.client`, :mod:`.cli`).
"""

from .clock import Clock, ManualClock, MonotonicClock
from .errors import (
    ConnectError,
    DuplicateName,
    IllegalTransition,
    InvalidConfig,
    InvalidDuration,
    InvalidName,
    InvalidSpacing,
    NotFound,
    ParseError,
    PodiumTimerError,
    ProtocolError,
    StorageFailure,
    UnsupportedVersion,
)
from .hapticsim import (
    FidelityReport,
    JitterKind,
    JitterModel,
    NotificationSchedule,
    ScheduleEntry,
    compile_schedule,
    simulate,
)
from .modality import (
    AlertEvent,
    AlertSink,
    Channel,
    HapticIntensity,
    HapticPattern,
    ModalitySettings,
    SinkHub,
    dispatch,
    speech_text,
)
from .presets import Preset, PresetStore, default_presets_path
from .runner import TimerRunner
from .scheduling import (
    AlertPlan,
    AlertSpec,
    Rule,
    ValidationReport,
    Violation,
    default_plan,
    quantize,
    rescale_plan,
    validate_plan,
)
from .service import SessionCore, SessionService
from .timer import (
    TERMINAL_INDEX,
    DisplayMode,
    DueAlert,
    TimerConfig,
    TimerPhase,
    TimerSession,
    TimerSnapshot,
    create,
    display_value,
    format_mm_ss,
)

__version__ = "0.1.0"
