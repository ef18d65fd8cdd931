"""Shared helpers: a service running on a background thread and a tiny
synchronous client."""

import asyncio
import json
import threading
import time

from podiumtimer.presets import PresetStore
from podiumtimer.service import SessionCore, SessionService


class ServiceHandle:
    def __init__(self, tmp_path, ui_dir=None, tick_rate_hz=10.0, clock=None):
        self.core = SessionCore(presets=PresetStore(tmp_path / "presets.json"), clock=clock)
        self.service = SessionService(
            self.core, port=0, tick_rate_hz=tick_rate_hz, ui_dir=ui_dir
        )
        self._ready = threading.Event()
        self._loop_holder = {}

        def runner():
            loop = asyncio.new_event_loop()
            asyncio.set_event_loop(loop)
            self._loop_holder["loop"] = loop
            loop.run_until_complete(self.service.run(self._ready))

        self._thread = threading.Thread(target=runner, daemon=True)
        self._thread.start()
        if not self._ready.wait(10):
            raise RuntimeError("service did not start")

    @property
    def address(self):
        return f"ws://127.0.0.1:{self.service.bound_port}"

    @property
    def http(self):
        return f"http://127.0.0.1:{self.service.bound_port}"

    def shutdown(self):
        loop = self._loop_holder.get("loop")
        if loop:
            loop.call_soon_threadsafe(self.service.stop)
        self._thread.join(timeout=5)


class Client:
    def __init__(self, address):
        from websockets.sync.client import connect

        self.conn = connect(address, open_timeout=5)
        self.frames = []

    def send(self, obj):
        self.conn.send(json.dumps(obj))

    def recv(self, timeout=3.0):
        frame = self.conn.recv(timeout=timeout)
        if isinstance(frame, bytes):
            frame = frame.decode()
        message = json.loads(frame)
        self.frames.append(message)
        return message

    def recv_until(self, predicate, timeout=5.0):
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            message = self.recv(timeout=max(0.05, deadline - time.monotonic()))
            if predicate(message):
                return message
        raise AssertionError("expected message never arrived")

    def recv_type(self, type_name, timeout=5.0):
        return self.recv_until(lambda m: m["type"] == type_name, timeout)

    def close(self):
        try:
            self.conn.close()
        except Exception:
            pass


FIG1_CONFIG_JSON = {
    "duration_s": 180,
    "alerts": [
        {
            "offset_before_end_s": offset,
            "modalities": {"visual": True, "auditory": True, "speech": True, "haptic": True},
            "haptic_intensity": intensity,
        }
        for offset, intensity in ((90, "normal"), (30, "normal"), (10, "prominent"))
    ],
}
