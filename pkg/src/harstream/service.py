"""Streaming prediction service.

One session per connection. The client configures the session with a
`hello`, sets the active activity with `label` messages, then streams
`sample` messages; every completed window produces a `prediction`
event followed by a `metrics` event. Messages within a session are
processed strictly in arrival order through a bounded inbox; overflow
drops the oldest buffered samples and emits a `warning` event.

Transports: WebSocket (endpoint /stream, health probe at /health) and
a newline-delimited-JSON TCP fallback. Both speak the same JSON
schema, `v: 1` in every message.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import logging
import threading
import time
from collections import deque
from dataclasses import dataclass
from http import HTTPStatus
from typing import Dict, List, Optional, Tuple

from websockets.asyncio.server import serve as ws_serve

from .evaluation import ConfusionMatrix, PredictionRecord, macro_metrics
from .features import FEATURE_COUNT, OnlineNormalizer, extract, normalize
from .learners import ALGORITHMS, create
from .windowing import (DEFAULT_RATE_HZ, DEFAULT_WINDOW_SIZE, ActivityLabel,
                        SensorSample, WindowAssembler)

log = logging.getLogger("harstream.service")

PROTOCOL_VERSION = 1
DEFAULT_QUEUE_LIMIT = 4096
STREAM_PATH = "/stream"
SAMPLE_KEYS = ("ax", "ay", "az", "gx", "gy", "gz")


class BindFailure(OSError):
    pass


class UnknownSession(KeyError):
    pass


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    transport: str = "ws"               # "ws" or "tcp"
    default_algo: str = "inb"
    default_seed: Optional[int] = None
    queue_limit: int = DEFAULT_QUEUE_LIMIT
    window_size: int = DEFAULT_WINDOW_SIZE
    rate_hz: float = DEFAULT_RATE_HZ


class StreamSession:
    """Transport-agnostic per-session pipeline and bookkeeping."""

    def __init__(self, session_id: str, algo: str, seed: Optional[int],
                 window_size: int, rate_hz: float):
        self.session_id = session_id
        self.algo = algo
        self.seed = seed
        self.assembler = WindowAssembler(window_size=window_size,
                                         rate_hz=rate_hz)
        self.normalizer = OnlineNormalizer(FEATURE_COUNT)
        self.model = create(algo, n_features=FEATURE_COUNT, seed=seed)
        self.labels: Dict[str, ActivityLabel] = {}
        self.active: Optional[ActivityLabel] = None
        self.confusion = ConfusionMatrix()
        self.windows_seen = 0
        self.ended = False

    # --- message handling; every handler returns (events, close_session) ---

    def handle(self, msg: dict) -> Tuple[List[dict], bool]:
        kind = msg.get("type")
        if kind == "label":
            return self._on_label(msg), False
        if kind == "sample":
            return self._on_sample(msg), False
        if kind == "end":
            return self.final_events(), True
        if kind == "hello":
            return [self._error("already-configured",
                                "session is already established")], False
        return [self._error("unknown-type",
                            f"unsupported message type: {kind!r}")], False

    def _on_label(self, msg: dict) -> List[dict]:
        name = msg.get("name")
        if name is None:
            self.active = None
            return [self._event("ack", of="label", label=None)]
        if not isinstance(name, str) or not name:
            return [self._error("bad-label", "label name must be a non-empty string")]
        label = self.labels.get(name)
        if label is None:
            label = ActivityLabel(len(self.labels), name)
            self.labels[name] = label
        self.active = label
        return [self._event("ack", of="label",
                            label={"id": label.id, "name": label.name})]

    def _on_sample(self, msg: dict) -> List[dict]:
        try:
            t_ms = int(msg["t_ms"])
            channels = [float(msg[k]) for k in SAMPLE_KEYS]
        except (KeyError, TypeError, ValueError):
            return [self._error("bad-sample",
                                "sample needs numeric t_ms, ax..az, gx..gz")]
        sample = SensorSample(t_ms, *channels, label=self.active)
        if not sample.is_finite():
            return [self._error("non-finite", "sample dropped: non-finite channel")]
        window = self.assembler.push_sample(sample)
        if window is None:
            return []
        return self._on_window(window)

    def _on_window(self, window) -> List[dict]:
        vector = normalize(extract(window), self.normalizer)
        t0 = time.perf_counter()
        result = self.model.predict(vector.values)
        t1 = time.perf_counter()
        predicted = result[0] if result is not None else None
        scores = dict(result[1]) if result is not None else {}
        true = window.label
        train_ms = None
        if true is not None:
            t2 = time.perf_counter()
            self.model.learn(vector.values, true.id)
            train_ms = (time.perf_counter() - t2) * 1000.0
            self.confusion.add(true.id, predicted)
        self.windows_seen += 1
        events = [self._event(
            "prediction",
            window=window.index,
            predicted=self._label_json(predicted),
            true=None if true is None else {"id": true.id, "name": true.name},
            correct=None if true is None else predicted == true.id,
            scores={str(c): float(s) for c, s in sorted(scores.items())},
            predict_ms=(t1 - t0) * 1000.0,
            train_ms=train_ms,
        )]
        events.append(self._metrics_event(final=False))
        return events

    def _label_json(self, label_id: Optional[int]) -> Optional[dict]:
        if label_id is None:
            return None
        for label in self.labels.values():
            if label.id == label_id:
                return {"id": label.id, "name": label.name}
        return {"id": label_id, "name": str(label_id)}

    def _metrics_event(self, final: bool) -> dict:
        cm = self.confusion
        body = {
            "windows": self.windows_seen,
            "evaluated": cm.total,
            "correct": cm.correct(),
            "none": cm.none_total(),
            "accuracy": cm.accuracy() if cm.total else None,
            "macro_f1": macro_metrics(cm)[2] if cm.total else None,
        }
        if final:
            body["final"] = True
        return self._event("metrics", **body)

    def final_events(self) -> List[dict]:
        self.ended = True
        return [self._metrics_event(final=True)]

    def _event(self, kind: str, **fields) -> dict:
        evt = {"v": PROTOCOL_VERSION, "type": kind, "session": self.session_id}
        evt.update(fields)
        log.debug("session %s event %s", self.session_id, kind)
        return evt

    def _error(self, code: str, message: str) -> dict:
        log.debug("session %s error %s: %s", self.session_id, code, message)
        return self._event("error", code=code, message=message)


class SessionRouter:
    """Creates the session on `hello` and forwards everything else."""

    def __init__(self, config: ServiceConfig, session_counter):
        self.config = config
        self.session: Optional[StreamSession] = None
        self._counter = session_counter

    def handle(self, msg: dict) -> Tuple[List[dict], bool]:
        if not isinstance(msg, dict):
            return [_anon_error("malformed", "message must be a JSON object")], False
        if self.session is None:
            if msg.get("type") != "hello":
                return [_anon_error("no-session",
                                    "first message must be hello")], False
            return self._on_hello(msg)
        return self.session.handle(msg)

    def _on_hello(self, msg: dict) -> Tuple[List[dict], bool]:
        algo = msg.get("algo", self.config.default_algo)
        if algo not in ALGORITHMS:
            return [_anon_error("unknown-algorithm",
                                f"algo must be one of {', '.join(ALGORITHMS)}")], False
        seed = msg.get("seed", self.config.default_seed)
        window_size = int(msg.get("window_size", self.config.window_size))
        rate_hz = float(msg.get("rate_hz", self.config.rate_hz))
        session_id = msg.get("session") or f"s{next(self._counter)}"
        try:
            self.session = StreamSession(str(session_id), algo, seed,
                                         window_size, rate_hz)
        except ValueError as exc:
            return [_anon_error("bad-config", str(exc))], False
        log.info("session %s: algo=%s seed=%s", session_id, algo, seed)
        ack = self.session._event("ack", of="hello", algo=algo, seed=seed,
                                  window_size=window_size, rate_hz=rate_hz)
        return [ack], False


def _anon_error(code: str, message: str) -> dict:
    return {"v": PROTOCOL_VERSION, "type": "error", "session": None,
            "code": code, "message": message}


class _Inbox:
    """Bounded FIFO that drops the oldest buffered sample on overflow."""

    def __init__(self, limit: int):
        self.limit = limit
        self.items: deque = deque()
        self._ready = asyncio.Event()

    def put(self, msg) -> int:
        dropped = 0
        while len(self.items) >= self.limit:
            for i, old in enumerate(self.items):
                if isinstance(old, dict) and old.get("type") == "sample":
                    del self.items[i]
                    break
            else:
                self.items.popleft()
            dropped += 1
        self.items.append(msg)
        self._ready.set()
        return dropped

    async def get(self):
        while not self.items:
            self._ready.clear()
            await self._ready.wait()
        return self.items.popleft()


_CLOSE = object()


class StreamServer:
    """Runs the session protocol over WebSocket or NDJSON-TCP."""

    def __init__(self, config: Optional[ServiceConfig] = None):
        self.config = config or ServiceConfig()
        self._session_counter = itertools.count(1)
        self._states: Dict[object, Tuple[SessionRouter, asyncio.Queue]] = {}
        self._stop: Optional[asyncio.Event] = None
        self.port: Optional[int] = None
        self.sessions_total = 0

    # --- shared per-connection plumbing ---

    async def _run_connection(self, send_line, recv_lines,
                              close_transport) -> None:
        router = SessionRouter(self.config, self._session_counter)
        inbox = _Inbox(self.config.queue_limit)
        outbox: asyncio.Queue = asyncio.Queue()
        key = object()
        self._states[key] = (router, outbox)
        self.sessions_total += 1

        async def sender():
            while True:
                evt = await outbox.get()
                if evt is _CLOSE:
                    break
                try:
                    await send_line(json.dumps(evt, separators=(",", ":")))
                except Exception:
                    break
            # closing the transport unblocks the receive loop below
            try:
                await close_transport()
            except Exception:
                pass

        async def worker():
            while True:
                msg = await inbox.get()
                if msg is _CLOSE:
                    outbox.put_nowait(_CLOSE)
                    return
                events, close = router.handle(msg)
                for evt in events:
                    outbox.put_nowait(evt)
                if close:
                    outbox.put_nowait(_CLOSE)
                    return

        sender_task = asyncio.ensure_future(sender())
        worker_task = asyncio.ensure_future(worker())
        try:
            async for raw in recv_lines:
                try:
                    msg = json.loads(raw)
                except (json.JSONDecodeError, UnicodeDecodeError):
                    outbox.put_nowait(_anon_error("malformed", "invalid JSON"))
                    continue
                if not isinstance(msg, dict):
                    outbox.put_nowait(_anon_error("malformed",
                                                  "message must be a JSON object"))
                    continue
                dropped = inbox.put(msg)
                if dropped:
                    sid = router.session.session_id if router.session else None
                    outbox.put_nowait({"v": PROTOCOL_VERSION, "type": "warning",
                                       "session": sid, "reason": "overflow",
                                       "dropped": dropped})
                if worker_task.done():
                    break
            inbox.put(_CLOSE)
            await asyncio.wait_for(worker_task, timeout=30)
            await asyncio.wait_for(sender_task, timeout=30)
        finally:
            for task in (worker_task, sender_task):
                if not task.done():
                    task.cancel()
            self._states.pop(key, None)

    def _flush_final_metrics(self) -> None:
        for router, outbox in list(self._states.values()):
            if router.session is not None and not router.session.ended:
                for evt in router.session.final_events():
                    outbox.put_nowait(evt)
            outbox.put_nowait(_CLOSE)

    # --- websocket transport ---

    def _health_response(self, connection, request):
        if request.path == "/health":
            body = json.dumps({"status": "ok",
                               "sessions": len(self._states),
                               "total_sessions": self.sessions_total})
            return connection.respond(HTTPStatus.OK, body + "\n")
        return None

    async def _ws_handler(self, connection) -> None:
        if connection.request.path != STREAM_PATH:
            await connection.close(code=1008, reason="unknown path")
            return
        try:
            await self._run_connection(connection.send, connection,
                                       connection.close)
        except ConnectionError:
            pass
        finally:
            await connection.close()

    async def _serve_ws(self, started: threading.Event, holder: dict) -> None:
        self._stop = asyncio.Event()
        try:
            async with ws_serve(self._ws_handler, self.config.host,
                                self.config.port, compression=None,
                                process_request=self._health_response) as server:
                self.port = server.sockets[0].getsockname()[1]
                holder["loop"] = asyncio.get_running_loop()
                started.set()
                await self._stop.wait()
                self._flush_final_metrics()
                await asyncio.sleep(0.05)
        except OSError as exc:
            holder["error"] = BindFailure(str(exc))
            started.set()

    # --- NDJSON over TCP fallback ---

    async def _tcp_handler(self, reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter) -> None:
        async def send_line(text: str) -> None:
            writer.write(text.encode() + b"\n")
            await writer.drain()

        async def lines():
            while True:
                raw = await reader.readline()
                if not raw:
                    return
                yield raw.decode().rstrip("\n")

        async def close_transport():
            writer.close()

        try:
            await self._run_connection(send_line, lines(), close_transport)
        except ConnectionError:
            pass
        finally:
            try:
                writer.close()
                await writer.wait_closed()
            except (ConnectionError, OSError):
                pass

    async def _serve_tcp(self, started: threading.Event, holder: dict) -> None:
        self._stop = asyncio.Event()
        try:
            server = await asyncio.start_server(self._tcp_handler,
                                                self.config.host,
                                                self.config.port)
        except OSError as exc:
            holder["error"] = BindFailure(str(exc))
            started.set()
            return
        async with server:
            self.port = server.sockets[0].getsockname()[1]
            holder["loop"] = asyncio.get_running_loop()
            started.set()
            await self._stop.wait()
            self._flush_final_metrics()
            await asyncio.sleep(0.05)

    async def _serve(self, started: threading.Event, holder: dict) -> None:
        if self.config.transport == "tcp":
            await self._serve_tcp(started, holder)
        else:
            await self._serve_ws(started, holder)

    def request_stop(self) -> None:
        if self._stop is not None:
            self._stop.set()


class ServerHandle:
    """A server running in a daemon thread, for tests and the CLI."""

    def __init__(self, server: StreamServer, thread: threading.Thread,
                 loop: asyncio.AbstractEventLoop):
        self.server = server
        self.thread = thread
        self.loop = loop

    @property
    def host(self) -> str:
        return self.server.config.host

    @property
    def port(self) -> int:
        return self.server.port

    @property
    def url(self) -> str:
        return f"ws://{self.host}:{self.port}{STREAM_PATH}"

    @property
    def health_url(self) -> str:
        return f"http://{self.host}:{self.port}/health"

    def stop(self, timeout: float = 10.0) -> None:
        self.loop.call_soon_threadsafe(self.server.request_stop)
        self.thread.join(timeout)


def start_in_thread(config: Optional[ServiceConfig] = None) -> ServerHandle:
    """Start a server on a background thread; raises BindFailure."""
    server = StreamServer(config)
    started = threading.Event()
    holder: dict = {}

    def runner():
        asyncio.run(server._serve(started, holder))

    thread = threading.Thread(target=runner, daemon=True,
                              name="harstream-service")
    thread.start()
    if not started.wait(timeout=10):
        raise BindFailure("server failed to start within 10 s")
    if "error" in holder:
        raise holder["error"]
    return ServerHandle(server, thread, holder["loop"])


def serve_forever(config: Optional[ServiceConfig] = None) -> None:
    """Blocking entry point used by the CLI `serve` subcommand."""
    handle = start_in_thread(config)
    kind = "ws" if handle.server.config.transport == "ws" else "tcp"
    log.info("listening on %s (%s)", handle.url if kind == "ws"
             else f"{handle.host}:{handle.port}", kind)
    try:
        while handle.thread.is_alive():
            handle.thread.join(timeout=0.5)
    except KeyboardInterrupt:
        log.info("shutting down")
        handle.stop()


class ServiceClient:
    """Synchronous test/CLI client; a reader thread collects events."""

    def __init__(self, url: str, open_timeout: float = 10.0):
        from websockets.sync.client import connect
        self.ws = connect(url, open_timeout=open_timeout, compression=None)
        self.events: List[dict] = []
        self._lock = threading.Lock()
        self._closed = threading.Event()
        self._thread = threading.Thread(target=self._pump, daemon=True)
        self._thread.start()

    def _pump(self) -> None:
        try:
            while True:
                evt = json.loads(self.ws.recv())
                with self._lock:
                    self.events.append(evt)
        except Exception:
            pass
        finally:
            self._closed.set()

    def send(self, **msg) -> None:
        msg.setdefault("v", PROTOCOL_VERSION)
        self.ws.send(json.dumps(msg, separators=(",", ":")))

    def hello(self, algo: str, seed: Optional[int] = None,
              session: Optional[str] = None, **extra) -> None:
        msg = {"type": "hello", "algo": algo, **extra}
        if seed is not None:
            msg["seed"] = seed
        if session is not None:
            msg["session"] = session
        self.send(**msg)

    def label(self, name: Optional[str]) -> None:
        self.send(type="label", name=name)

    def sample(self, s: SensorSample) -> None:
        self.send(type="sample", t_ms=s.t_ms, ax=s.ax, ay=s.ay, az=s.az,
                  gx=s.gx, gy=s.gy, gz=s.gz)

    def snapshot(self) -> List[dict]:
        with self._lock:
            return list(self.events)

    def wait_for(self, predicate, timeout: float = 10.0) -> Optional[dict]:
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            for evt in self.snapshot():
                if predicate(evt):
                    return evt
            if self._closed.is_set():
                for evt in self.snapshot():
                    if predicate(evt):
                        return evt
                return None
            time.sleep(0.002)
        return None

    def end_and_wait(self, timeout: float = 60.0) -> List[dict]:
        """Send `end`, wait for the server to flush and close."""
        self.send(type="end")
        self._closed.wait(timeout)
        return self.snapshot()

    def close(self) -> None:
        try:
            self.ws.close()
        except Exception:
            pass
        self._closed.wait(2.0)


def stream_samples(client: ServiceClient, samples, speed: float = 0.0) -> None:
    """Send samples, emitting a label message whenever the label changes.

    speed 0 streams as fast as possible; speed 1 follows the sample
    timestamps in real time, N runs N times faster.
    """
    current = object()
    previous_ms: Optional[int] = None
    for s in samples:
        name = None if s.label is None else s.label.name
        if name != current:
            client.label(name)
            current = name
        if speed > 0 and previous_ms is not None and s.t_ms > previous_ms:
            time.sleep((s.t_ms - previous_ms) / 1000.0 / speed)
        previous_ms = s.t_ms
        client.sample(s)


def replay_csv(url: str, csv_path: str, algo: str,
               seed: Optional[int] = None, speed: float = 0.0,
               session: Optional[str] = None) -> List[dict]:
    """Stream a recorded CSV at a live server; returns all events."""
    from .synth import replay

    samples = replay(csv_path)
    client = ServiceClient(url)
    try:
        client.hello(algo, seed=seed, session=session)
        stream_samples(client, samples, speed=speed)
        return client.end_and_wait()
    finally:
        client.close()


def prediction_log_from_events(events: List[dict]) -> str:
    """Canonical per-window log built from prediction events."""
    from .evaluation import render_prediction_log

    records = [record_from_event(e) for e in events
               if e.get("type") == "prediction" and e.get("true") is not None]
    return render_prediction_log(records)


def record_from_event(evt: dict) -> PredictionRecord:
    """Rebuild a prediction record from a wire event (latencies zeroed)."""
    predicted = evt.get("predicted")
    true = evt.get("true")
    if true is None:
        raise ValueError("event has no true label; cannot form a record")
    scores = {int(c): float(s) for c, s in (evt.get("scores") or {}).items()}
    return PredictionRecord(
        window_index=int(evt["window"]), true_id=int(true["id"]),
        predicted_id=None if predicted is None else int(predicted["id"]),
        correct=bool(evt.get("correct")), scores=scores,
        predict_s=0.0, train_s=0.0)
