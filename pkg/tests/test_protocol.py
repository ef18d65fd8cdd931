from datetime import datetime, timezone

import pytest
from hypothesis import given, settings, strategies as st

from podiumtimer import protocol
from podiumtimer.errors import ProtocolError
from podiumtimer.modality import (
    AlertEvent,
    Channel,
    HapticIntensity,
    HapticPattern,
    ModalitySettings,
)
from podiumtimer.presets import Preset
from podiumtimer.protocol import encode, parse, parse_command
from podiumtimer.scheduling import AlertSpec
from podiumtimer.timer import (
    DisplayMode,
    TimerConfig,
    TimerPhase,
    TimerSnapshot,
)

# -- strategies ---------------------------------------------------------------

st_req_id = st.text(min_size=1, max_size=12)
st_modalities = st.builds(
    ModalitySettings,
    visual=st.booleans(),
    auditory=st.booleans(),
    speech=st.booleans(),
    haptic=st.booleans(),
)


@st.composite
def st_config(draw):
    duration = draw(st.integers(4, 300)) * 5
    grid = list(range(5, duration, 5))
    count = draw(st.integers(1, min(3, len(grid))))
    offsets = sorted(
        draw(st.lists(st.sampled_from(grid), min_size=count, max_size=count, unique=True)),
        reverse=True,
    )
    return TimerConfig(
        duration_s=duration,
        alerts=tuple(
            AlertSpec(
                offset_before_end_s=o,
                modalities=draw(st_modalities),
                haptic_intensity=draw(st.sampled_from(HapticIntensity)),
            )
            for o in offsets
        ),
    )


@st.composite
def st_snapshot(draw):
    config = draw(st_config())
    elapsed = draw(st.floats(0, config.duration_s, allow_nan=False))
    fired = draw(st.sets(st.integers(0, len(config.alerts) - 1)))
    return TimerSnapshot(
        phase=draw(st.sampled_from(TimerPhase)),
        elapsed_s=elapsed,
        remaining_s=config.duration_s - elapsed,
        display_mode=draw(st.sampled_from(DisplayMode)),
        fired_alert_ids=frozenset(fired),
        config=config,
    )


st_datetime = st.datetimes(
    min_value=datetime(2000, 1, 1), max_value=datetime(2100, 1, 1)
).map(lambda d: d.replace(tzinfo=timezone.utc))


@st.composite
def st_preset(draw):
    return Preset(
        id=draw(st.uuids()).hex,
        name=draw(st.text(min_size=1, max_size=64).filter(lambda s: s.strip())),
        config=draw(st_config()),
        created_at=draw(st_datetime),
        updated_at=draw(st_datetime),
    )


@st.composite
def st_alert_event(draw):
    channel = draw(st.sampled_from(Channel))
    if channel is Channel.HAPTIC:
        pulses = draw(
            st.lists(
                st.tuples(st.integers(1, 2000), st.integers(0, 2000)),
                min_size=1,
                max_size=4,
            )
        )
        payload = HapticPattern(draw(st.sampled_from(HapticIntensity)), tuple(pulses))
    else:
        payload = draw(st.text(max_size=40))
    return AlertEvent(
        alert_index=draw(st.integers(-1, 2)),
        channel=channel,
        payload=payload,
        session_time_s=draw(st.floats(0, 10_000, allow_nan=False)),
    )


st_seq = st.integers(0, 2**31)
st_message = st.one_of(
    st.builds(protocol.Hello, req_id=st_req_id),
    st.builds(protocol.Configure, req_id=st_req_id, config=st_config()),
    st.builds(protocol.LoadPreset, req_id=st_req_id, preset_id=st.text(min_size=1, max_size=36)),
    st.builds(protocol.Start, req_id=st_req_id),
    st.builds(protocol.Pause, req_id=st_req_id),
    st.builds(protocol.Resume, req_id=st_req_id),
    st.builds(protocol.Stop, req_id=st_req_id),
    st.builds(protocol.SetDisplayMode, req_id=st_req_id, mode=st.sampled_from(DisplayMode)),
    st.builds(protocol.SetModalities, req_id=st_req_id, modalities=st_modalities),
    st.builds(protocol.SavePreset, req_id=st_req_id, name=st.text(min_size=1, max_size=64)),
    st.builds(protocol.DeletePreset, req_id=st_req_id, preset_id=st.text(min_size=1, max_size=36)),
    st.builds(
        protocol.Welcome,
        client_id=st.text(min_size=1, max_size=8),
        seq=st_seq,
        snapshot=st_snapshot(),
        modalities=st_modalities,
        presets=st.lists(st_preset(), max_size=3).map(tuple),
    ),
    st.builds(protocol.Snapshot, seq=st_seq, snapshot=st_snapshot(), modalities=st_modalities),
    st.builds(
        protocol.Tick,
        seq=st_seq,
        elapsed_s=st.floats(0, 100_000, allow_nan=False),
        remaining_s=st.floats(0, 100_000, allow_nan=False),
    ),
    st.builds(
        protocol.AlertFired,
        seq=st_seq,
        alert_index=st.integers(-1, 2),
        offset_before_end_s=st.integers(0, 7200),
        session_time_s=st.floats(0, 100_000, allow_nan=False),
        events=st.lists(st_alert_event(), max_size=4).map(tuple),
    ),
    st.builds(protocol.StateChanged, seq=st_seq, phase=st.sampled_from(TimerPhase)),
    st.builds(protocol.PresetList, seq=st_seq, presets=st.lists(st_preset(), max_size=3).map(tuple)),
    st.builds(
        protocol.Error,
        code=st.sampled_from(["protocol_error", "illegal_transition", "not_found"]),
        message=st.text(max_size=60),
        in_reply_to=st.one_of(st.none(), st.text(min_size=1, max_size=12)),
    ),
    st.builds(protocol.Ack, in_reply_to=st_req_id),
)


@given(message=st_message)
@settings(max_examples=400)
def test_round_trip_identity(message):
    assert parse(encode(message)) == message


def test_round_trip_examples(fig1_config):
    snapshot = TimerSnapshot(
        phase=TimerPhase.RUNNING,
        elapsed_s=96.8,
        remaining_s=83.2,
        display_mode=DisplayMode.COUNTDOWN,
        fired_alert_ids=frozenset({0}),
        config=fig1_config,
    )
    samples = [
        protocol.Hello(req_id="h1"),
        protocol.Configure(req_id="c1", config=fig1_config),
        protocol.Start(req_id="s1"),
        protocol.SetDisplayMode(req_id="d1", mode=DisplayMode.COUNT_UP),
        protocol.SetModalities(req_id="m1", modalities=ModalitySettings(haptic=False)),
        protocol.Welcome(
            client_id="c9", seq=17, snapshot=snapshot,
            modalities=ModalitySettings(), presets=(),
        ),
        protocol.Tick(seq=18, elapsed_s=97.0, remaining_s=83.0),
        protocol.StateChanged(seq=19, phase=TimerPhase.PAUSED),
        protocol.Error(code="not_found", message="no preset", in_reply_to="x2"),
        protocol.Ack(in_reply_to="c1"),
    ]
    for message in samples:
        assert parse(encode(message)) == message


class TestMalformedFrames:
    @pytest.mark.parametrize(
        "text",
        [
            "not json{",
            "[]",
            "42",
            '{"no_type": true}',
            '{"type": "warp"}',
            '{"type": "start"}',
            '{"type": "configure", "req_id": "x"}',
            '{"type": "configure", "req_id": "x", "config": {"duration_s": "long", "alerts": []}}',
            '{"type": "tick", "seq": "one", "elapsed_s": 0, "remaining_s": 0}',
            '{"type": "set_display_mode", "req_id": "x", "mode": "sideways"}',
            '{"type": "set_modalities", "req_id": "x", "modalities": {"visual": 1, "auditory": true, "speech": true, "haptic": true}}',
        ],
    )
    def test_rejected(self, text):
        with pytest.raises(ProtocolError):
            parse(text)

    def test_error_message_carries_field_context(self):
        with pytest.raises(ProtocolError) as exc:
            parse('{"type": "configure", "req_id": "x", "config": {"duration_s": 60, "alerts": [{"offset_before_end_s": "ten"}]}}')
        assert "alerts[0]" in str(exc.value)

    def test_parse_command_rejects_events(self):
        frame = encode(protocol.Ack(in_reply_to="x"))
        with pytest.raises(ProtocolError):
            parse_command(frame)

    def test_parse_command_accepts_commands(self):
        frame = encode(protocol.Stop(req_id="s"))
        assert parse_command(frame) == protocol.Stop(req_id="s")

    def test_extra_fields_tolerated(self):
        assert parse('{"type": "start", "req_id": "x", "hint": "fast"}') == protocol.Start(req_id="x")
