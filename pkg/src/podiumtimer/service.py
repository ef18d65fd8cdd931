"""Local session service: one timer, many synchronized clients.

The protocol logic lives in :class:`SessionCore`, which is synchronous and
transport-agnostic: commands go in, events come out through per-client
bounded outboxes. Tests drive it directly for fully deterministic runs;
:class:`SessionService` wraps it in a localhost WebSocket endpoint.

The core is server-authoritative. Commands apply strictly in arrival
order, every resulting state event is broadcast once to each connected
client with a shared, strictly increasing sequence number, and a client
whose outbox overflows gets its stale backlog replaced by one fresh
snapshot rather than being disconnected.
"""

from __future__ import annotations

import asyncio
import contextlib
import dataclasses
import logging
import mimetypes
from collections import deque
from http import HTTPStatus
from pathlib import Path

from . import protocol
from .clock import Clock, MonotonicClock
from .errors import PodiumTimerError, ProtocolError
from .modality import ModalitySettings, dispatch
from .presets import PresetStore
from .protocol import (
    Ack,
    AlertFired,
    Command,
    Error,
    Event,
    PresetList,
    Snapshot,
    StateChanged,
    Tick,
    Welcome,
)
from .scheduling import default_plan
from .timer import TimerConfig, TimerPhase, TimerSession, create

log = logging.getLogger(__name__)

DEFAULT_PORT = 7365
DEFAULT_TICK_RATE_HZ = 1.0
DEFAULT_OUTBOX_CAPACITY = 64

# Out-of-the-box session shown to clients before anyone configures one.
DEFAULT_DURATION_S = 300


def _initial_config() -> TimerConfig:
    plan = default_plan(DEFAULT_DURATION_S, 3)
    return TimerConfig(duration_s=plan.duration_s, alerts=plan.alerts)


class _Outbox:
    """Bounded per-client event queue.

    A slow client cannot block anyone: when the queue is full its stale
    backlog is dropped and replaced by one resync snapshot.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.events: deque[Event] = deque()
        self.overflows = 0

    def offer(self, event: Event, resync: Snapshot) -> None:
        if len(self.events) >= self.capacity:
            self.events.clear()
            self.events.append(resync)
            self.overflows += 1
        else:
            self.events.append(event)

    def drain(self) -> list[Event]:
        out = list(self.events)
        self.events.clear()
        return out


class SessionCore:
    """Engine, settings, presets, and client fan-out behind one command loop.

    All methods must be called from a single logical owner (the service's
    event loop, or a test driving it directly).
    """

    def __init__(
        self,
        presets: PresetStore | None = None,
        clock: Clock | None = None,
        config: TimerConfig | None = None,
        settings: ModalitySettings | None = None,
        outbox_capacity: int = DEFAULT_OUTBOX_CAPACITY,
    ):
        self.presets = presets if presets is not None else PresetStore()
        self.clock = clock if clock is not None else MonotonicClock()
        self.settings = settings if settings is not None else ModalitySettings()
        self.session: TimerSession = create(config if config is not None else _initial_config())
        self.seq = 0
        self._outboxes: dict[str, _Outbox] = {}
        self._outbox_capacity = outbox_capacity
        self._next_client = 1

    # -- client lifecycle -----------------------------------------------------

    def connect(self) -> str:
        client_id = f"c{self._next_client}"
        self._next_client += 1
        self._outboxes[client_id] = _Outbox(self._outbox_capacity)
        self._send(client_id, self._welcome(client_id))
        return client_id

    def disconnect(self, client_id: str) -> None:
        self._outboxes.pop(client_id, None)

    def clients(self) -> list[str]:
        return list(self._outboxes)

    def drain(self, client_id: str) -> list[Event]:
        outbox = self._outboxes.get(client_id)
        return outbox.drain() if outbox else []

    def pending(self, client_id: str) -> int:
        outbox = self._outboxes.get(client_id)
        return len(outbox.events) if outbox else 0

    def overflows(self, client_id: str) -> int:
        outbox = self._outboxes.get(client_id)
        return outbox.overflows if outbox else 0

    # -- command handling ------------------------------------------------------

    def handle_text(self, client_id: str, text: str) -> bool:
        """Apply one wire frame. Returns False when the connection must close."""
        try:
            command = protocol.parse_command(text)
        except ProtocolError as exc:
            self._send(client_id, Error(code=exc.code, message=str(exc)))
            return False
        self.apply(client_id, command)
        return True

    def apply(self, client_id: str, command: Command) -> None:
        """Apply a command in arrival order; errors go only to the sender."""
        try:
            self._apply(client_id, command)
        except PodiumTimerError as exc:
            self._send(
                client_id,
                Error(code=exc.code, message=str(exc), in_reply_to=command.req_id),
            )
        else:
            self._send(client_id, Ack(in_reply_to=command.req_id))

    def _apply(self, client_id: str, command: Command) -> None:
        now = self.clock.now()
        if isinstance(command, protocol.Hello):
            self._send(client_id, self._welcome(client_id))
        elif isinstance(command, protocol.Configure):
            self._replace_session(command.config)
        elif isinstance(command, protocol.LoadPreset):
            preset = self.presets.get(command.preset_id)
            self._replace_session(preset.config)
        elif isinstance(command, protocol.Start):
            self._transition(self.session.start, now)
        elif isinstance(command, protocol.Pause):
            self._transition(self.session.pause, now)
        elif isinstance(command, protocol.Resume):
            self._transition(self.session.resume, now)
        elif isinstance(command, protocol.Stop):
            self._transition(self.session.stop, now)
        elif isinstance(command, protocol.SetDisplayMode):
            self.session.display_mode = command.mode
            self._broadcast_snapshot()
        elif isinstance(command, protocol.SetModalities):
            self.settings = command.modalities
            self._broadcast_snapshot()
        elif isinstance(command, protocol.SavePreset):
            self.presets.save(command.name, self.session.config)
            self._broadcast_presets()
        elif isinstance(command, protocol.DeletePreset):
            self.presets.delete(command.preset_id)
            self._broadcast_presets()
        else:  # pragma: no cover - parse_command only yields the above
            raise ProtocolError(f"unsupported command {command!r}")

    def _replace_session(self, config: TimerConfig) -> None:
        mode = self.session.display_mode
        self.session = create(config)
        self.session.display_mode = mode
        self._broadcast_snapshot()

    def _transition(self, method, now: float) -> None:
        snapshot = method(now)
        self._broadcast(StateChanged(seq=0, phase=snapshot.phase))
        self._broadcast(
            Tick(seq=0, elapsed_s=snapshot.elapsed_s, remaining_s=snapshot.remaining_s)
        )

    # -- the tick driver ---------------------------------------------------------

    def tick(self, emit_tick: bool = True) -> None:
        """Advance the engine; broadcast ticks, due alerts, and finish."""
        if self.session.phase is not TimerPhase.RUNNING:
            return
        now = self.clock.now()
        snapshot, due_alerts = self.session.tick(now)
        if emit_tick:
            self._broadcast(
                Tick(seq=0, elapsed_s=snapshot.elapsed_s, remaining_s=snapshot.remaining_s)
            )
        for due in due_alerts:
            spec = None if due.is_terminal else self.session.config.alerts[due.index]
            events = dispatch(due, self.settings, spec, snapshot.remaining_s)
            self._broadcast(
                AlertFired(
                    seq=0,
                    alert_index=due.index,
                    offset_before_end_s=due.offset_before_end_s,
                    session_time_s=due.session_time_s,
                    events=tuple(events),
                )
            )
        if snapshot.phase is TimerPhase.FINISHED:
            self._broadcast(StateChanged(seq=0, phase=TimerPhase.FINISHED))

    def seconds_until_next_due(self) -> float | None:
        return self.session.seconds_until_next_due(self.clock.now())

    # -- event plumbing ------------------------------------------------------------

    def _welcome(self, client_id: str) -> Welcome:
        return Welcome(
            client_id=client_id,
            seq=self.seq,
            snapshot=self.session.snapshot(self.clock.now()),
            modalities=self.settings,
            presets=tuple(self.presets.list()),
        )

    def _resync_snapshot(self) -> Snapshot:
        return Snapshot(
            seq=self.seq,
            snapshot=self.session.snapshot(self.clock.now()),
            modalities=self.settings,
        )

    def _broadcast_snapshot(self) -> None:
        self._broadcast(self._resync_snapshot())

    def _broadcast_presets(self) -> None:
        self._broadcast(PresetList(seq=0, presets=tuple(self.presets.list())))

    def _broadcast(self, event: Event) -> None:
        self.seq += 1
        stamped = dataclasses.replace(event, seq=self.seq)
        resync = self._resync_snapshot()
        for outbox in self._outboxes.values():
            outbox.offer(stamped, resync)

    def _send(self, client_id: str, event: Event) -> None:
        outbox = self._outboxes.get(client_id)
        if outbox is not None:
            outbox.offer(event, self._resync_snapshot())


class SessionService:
    """WebSocket front end for a SessionCore on localhost.

    Plain HTTP requests on the same port serve the static web UI when a
    directory was provided, so one address covers both the control page
    and the socket it talks to.
    """

    def __init__(
        self,
        core: SessionCore,
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
        tick_rate_hz: float = DEFAULT_TICK_RATE_HZ,
        ui_dir: Path | str | None = None,
    ):
        if tick_rate_hz <= 0:
            raise ValueError(f"tick rate must be > 0, got {tick_rate_hz}")
        self.core = core
        self.host = host
        self.port = port
        self.tick_rate_hz = tick_rate_hz
        self.ui_dir = Path(ui_dir) if ui_dir else None
        self.bound_port: int | None = None
        self._wakes: dict[str, asyncio.Event] = {}
        self._stopping: asyncio.Event | None = None

    async def run(self, ready: "object | None" = None) -> None:
        """Serve until cancelled. ``ready`` (threading.Event) is set once bound."""
        from websockets.asyncio.server import serve

        self._stopping = asyncio.Event()
        async with serve(
            self._handler,
            self.host,
            self.port,
            process_request=self._process_request,
        ) as server:
            self.bound_port = server.sockets[0].getsockname()[1]
            log.info("listening on ws://%s:%d", self.host, self.bound_port)
            if ready is not None:
                ready.set()
            tick_task = asyncio.create_task(self._tick_loop())
            try:
                await self._stopping.wait()
            finally:
                tick_task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await tick_task

    def stop(self) -> None:
        if self._stopping is not None:
            self._stopping.set()

    # -- connection handling -----------------------------------------------------

    async def _handler(self, ws) -> None:
        client_id = self.core.connect()
        wake = asyncio.Event()
        self._wakes[client_id] = wake
        wake.set()
        sender = asyncio.create_task(self._sender(client_id, ws, wake))
        close_after_error = False
        try:
            async for text in ws:
                if isinstance(text, bytes):
                    text = text.decode("utf-8", errors="replace")
                ok = self.core.handle_text(client_id, text)
                self._wake_all()
                if not ok:
                    close_after_error = True
                    break
        except Exception:
            pass
        finally:
            if close_after_error:
                # Give the sender a moment to flush the error frame.
                for _ in range(100):
                    if not self.core.pending(client_id):
                        break
                    await asyncio.sleep(0.01)
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            self._wakes.pop(client_id, None)
            self.core.disconnect(client_id)
            with contextlib.suppress(Exception):
                await ws.close(code=1002 if close_after_error else 1000)

    async def _sender(self, client_id: str, ws, wake: asyncio.Event) -> None:
        try:
            while True:
                await wake.wait()
                wake.clear()
                for event in self.core.drain(client_id):
                    await ws.send(protocol.encode(event))
        except Exception:
            pass

    def _wake_all(self) -> None:
        for wake in self._wakes.values():
            wake.set()

    # -- the tick loop -------------------------------------------------------------

    async def _tick_loop(self) -> None:
        interval = 1.0 / self.tick_rate_hz
        next_tick = self.core.clock.now() + interval
        while True:
            now = self.core.clock.now()
            emit = now >= next_tick - 1e-6
            if emit:
                while next_tick <= now + 1e-6:
                    next_tick += interval
            self.core.tick(emit_tick=emit)
            self._wake_all()
            delay = next_tick - self.core.clock.now()
            until_due = self.core.seconds_until_next_due()
            if until_due is not None:
                delay = min(delay, until_due)
            await asyncio.sleep(max(0.0, min(delay, interval)))

    # -- static UI over plain HTTP ----------------------------------------------------

    def _process_request(self, connection, request):
        if "websocket" in request.headers.get("Upgrade", "").lower():
            return None
        path = request.path.split("?", 1)[0]
        if path in ("/healthz", "/health"):
            return connection.respond(HTTPStatus.OK, "ok\n")
        if self.ui_dir is None:
            return connection.respond(
                HTTPStatus.NOT_FOUND, "no web UI bundled; connect a WebSocket client\n"
            )
        target = (self.ui_dir / (path.lstrip("/") or "index.html")).resolve()
        try:
            target.relative_to(self.ui_dir.resolve())
        except ValueError:
            return connection.respond(HTTPStatus.FORBIDDEN, "forbidden\n")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return connection.respond(HTTPStatus.NOT_FOUND, "not found\n")
        from websockets.datastructures import Headers
        from websockets.http11 import Response

        body = target.read_bytes()
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        headers = Headers(
            [("Content-Type", content_type), ("Content-Length", str(len(body)))]
        )
        return Response(HTTPStatus.OK, "OK", headers, body)
