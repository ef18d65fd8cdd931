import pytest
from hypothesis import settings

from podiumtimer.modality import HapticIntensity
from podiumtimer.scheduling import AlertSpec
from podiumtimer.timer import TimerConfig

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture
def fig1_config() -> TimerConfig:
    """3:00 session with reminders 1:30 / 0:30 / 0:10 before end, the last
    one prominent."""
    return TimerConfig(
        duration_s=180,
        alerts=(
            AlertSpec(90),
            AlertSpec(30),
            AlertSpec(10, haptic_intensity=HapticIntensity.PROMINENT),
        ),
    )
