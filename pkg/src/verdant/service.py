"""Local telemetry service: HTTP + WebSocket facade over a live simulation.

One background thread owns the controller and the garden state. It ticks
the simulation at wall clock time divided by a speed multiplier and
drains a command queue between ticks, so every mutation is serialized and
the event log stays gap-free no matter how many clients hammer the API.
Reads never touch the live objects; they see an immutable snapshot that
is swapped atomically after each tick or command.

Persistence lives under a data directory (argument, else the
VERDANT_DATA_DIR environment variable, else ./verdant_data):

    schedules.json   current slot list, written atomically on every change
    events.ndjson    append-only event log, one JSON record per line

Sequence numbers continue from the last persisted event, so the log file
stays monotone across restarts. A corrupt store fails startup loudly with
the offending file named.
"""

from __future__ import annotations

import asyncio
import json
import logging
import os
import queue
import socket
import threading
import time
from concurrent.futures import Future
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, StrictBool

from .controller import CommandKind, CommandOutcome, Controller
from .irrigation import ScheduleSlot, add_slot
from .sim import Scenario, initial_state, sample_sensors, step, validate_scenario
from .simclock import parse_time_of_day
from .thresholds import ThresholdProfile, default_profile

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "VERDANT_DATA_DIR"
DEFAULT_DATA_DIR = "verdant_data"


class PersistenceError(RuntimeError):
    """A persistence file is unreadable or corrupt; startup must refuse."""


class ServiceError(RuntimeError):
    pass


def resolve_data_dir(data_dir: str | Path | None = None) -> Path:
    if data_dir is not None:
        return Path(data_dir)
    return Path(os.environ.get(DATA_DIR_ENV, DEFAULT_DATA_DIR))


class ScheduleStore:
    """Slot list persisted as one JSON document, written atomically."""

    def __init__(self, directory: Path):
        self.path = directory / "schedules.json"

    def load(self) -> dict | None:
        if not self.path.exists():
            return None
        try:
            doc = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise PersistenceError(f"corrupt schedule store {self.path}: {exc}") from exc
        if not isinstance(doc, dict) or not isinstance(doc.get("slots"), list) \
                or not isinstance(doc.get("version"), int):
            raise PersistenceError(
                f"corrupt schedule store {self.path}: expected "
                "{'version': int, 'slots': [...]}")
        return doc

    def write(self, slots: list[dict], version: int) -> None:
        payload = json.dumps({"version": version, "slots": slots}, indent=2) + "\n"
        tmp = self.path.with_name(self.path.name + ".tmp")
        tmp.write_text(payload)
        os.replace(tmp, self.path)


class EventLogStore:
    """Append-only newline-delimited event records."""

    def __init__(self, directory: Path):
        self.path = directory / "events.ndjson"
        self._handle = None

    def load(self) -> list[dict]:
        """Validate the whole file and return every persisted record."""
        if not self.path.exists():
            return []
        records: list[dict] = []
        try:
            with self.path.open() as handle:
                for line_no, line in enumerate(handle, start=1):
                    if not line.strip():
                        continue
                    try:
                        record = json.loads(line)
                        record["seq"] = int(record["seq"])
                    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                        raise PersistenceError(
                            f"corrupt event log {self.path} at line {line_no}: {exc}") from exc
                    records.append(record)
        except OSError as exc:
            raise PersistenceError(f"cannot read event log {self.path}: {exc}") from exc
        return records

    def append(self, events: list[dict]) -> None:
        if not events:
            return
        if self._handle is None:
            self._handle = self.path.open("a")
        for event in events:
            self._handle.write(json.dumps(event, separators=(",", ":")) + "\n")
        self._handle.flush()

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()
            self._handle = None


@dataclass
class _Command:
    kind: CommandKind
    args: dict
    future: Future


class GardenService:
    """Owns the simulation thread, the command queue and the stores."""

    def __init__(self, scenario: Scenario, profile: ThresholdProfile | None = None,
                 data_dir: str | Path | None = None, speed: float = 60.0):
        if speed <= 0:
            raise ServiceError("speed multiplier must be positive")
        self.scenario = scenario
        self.profile = profile or default_profile()
        validate_scenario(scenario, self.profile)
        self.speed = speed

        self.data_dir = resolve_data_dir(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._schedule_store = ScheduleStore(self.data_dir)
        self._event_store = EventLogStore(self.data_dir)

        persisted = self._schedule_store.load()
        # Prior runs' events stay queryable; live sequence numbers continue
        # where the persisted history ends.
        self._history = self._event_store.load()
        first_seq = (self._history[-1]["seq"] if self._history else 0) + 1

        self._controller = Controller(self.profile, clock=float(scenario.start_offset),
                                      first_seq=first_seq)
        if persisted is not None:
            # The store owns schedules: it replaces whatever the scenario ships.
            slots = tuple(ScheduleSlot(id=s["id"], time_of_day=s["time_of_day"],
                                       enabled=bool(s.get("enabled", True)))
                          for s in persisted["slots"])
            self._controller.irrigation = replace(self._controller.irrigation, slots=slots)
            self._schedule_version = int(persisted["version"])
        else:
            for time_of_day in scenario.controller.slots:
                self._controller.irrigation, _ = add_slot(self._controller.irrigation,
                                                          time_of_day)
            self._schedule_version = 0
        if scenario.controller.armed:
            self._controller.handle_command(CommandKind.ARM)

        self._garden = initial_state(scenario)
        self._commands: queue.Queue[_Command] = queue.Queue()
        self._subscribers: list[queue.Queue] = []
        self._lock = threading.RLock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._view: dict = self._controller.snapshot()
        self._persist_new_events(0)

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> None:
        if self._thread is not None:
            return
        self._thread = threading.Thread(target=self._loop, name="verdant-sim", daemon=True)
        self._thread.start()
        logger.info("simulation loop started (scenario=%s speed=x%s data_dir=%s)",
                    self.scenario.name, self.speed, self.data_dir)

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None
        self._event_store.close()

    # -- reads ----------------------------------------------------------------

    def snapshot(self) -> dict:
        return self._view

    def events_since(self, seq: int) -> list[dict]:
        """Events with seq > given, oldest first, spanning service restarts."""
        history = [e for e in self._history if e["seq"] > seq]
        with self._lock:
            return history + [e.to_dict() for e in self._controller.events_since(seq)]

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    # -- commands ----------------------------------------------------------------

    def submit(self, kind: CommandKind, args: dict | None = None,
               timeout: float = 10.0) -> CommandOutcome:
        """Enqueue a command for the simulation thread and wait for its
        outcome. Raises TimeoutError if the loop is wedged."""
        future: Future = Future()
        self._commands.put(_Command(kind, args or {}, future))
        return future.result(timeout=timeout)

    # -- simulation thread ----------------------------------------------------------

    def _loop(self) -> None:
        tick_wall = self.scenario.tick_s / self.speed
        next_tick = time.monotonic() + tick_wall
        while not self._stop.is_set():
            now = time.monotonic()
            if now >= next_tick:
                self._do_tick()
                next_tick += tick_wall
                if next_tick < now - 10 * tick_wall:  # fell far behind; resynchronize
                    next_tick = now + tick_wall
                continue
            try:
                command = self._commands.get(timeout=min(next_tick - now, 0.1))
            except queue.Empty:
                continue
            self._apply_command(command)

    def _do_tick(self) -> None:
        with self._lock:
            before = self._controller.last_seq
            frame = sample_sensors(self._garden, self.scenario)
            commands = self._controller.tick(frame, self._garden.sim_clock)
            self._garden = step(self._garden, commands.valve_open, self.scenario)
            events = self._persist_new_events(before)
            view = self._controller.snapshot()
            self._view = view
            self._broadcast(events, view)

    def _apply_command(self, command: _Command) -> None:
        try:
            with self._lock:
                before = self._controller.last_seq
                outcome = self._controller.handle_command(command.kind, command.args)
                events = self._persist_new_events(before)
                if command.kind in (CommandKind.ADD_SLOT, CommandKind.REMOVE_SLOT) \
                        and outcome.accepted:
                    self._schedule_version += 1
                    self._schedule_store.write(
                        [s.to_dict() for s in self._controller.irrigation.slots],
                        self._schedule_version)
                self._view = self._controller.snapshot()
                self._broadcast(events, None)
        except BaseException as exc:
            command.future.set_exception(exc)
        else:
            command.future.set_result(outcome)

    def _persist_new_events(self, since_seq: int) -> list[dict]:
        events = [e.to_dict() for e in self._controller.events_since(since_seq)]
        self._event_store.append(events)
        return events

    def _broadcast(self, events: list[dict], view: dict | None) -> None:
        for q in list(self._subscribers):
            q.put((events, view))


# -- HTTP layer -----------------------------------------------------------------


class WaterBody(BaseModel):
    action: Literal["start", "stop"]


class SecurityBody(BaseModel):
    armed: StrictBool


class SlotBody(BaseModel):
    time: str


def api_error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        {"http_status": status, "code": code, "message": message},
        status_code=status)


def build_app(service: GardenService, ui_dir: str | Path | None = None) -> FastAPI:
    """Assemble the FastAPI application around a GardenService."""

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(_):
        service.start()
        try:
            yield
        finally:
            service.stop()

    app = FastAPI(title="verdant telemetry", lifespan=lifespan)
    app.state.service = service

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_, exc: RequestValidationError):
        return api_error(400, "malformed_request", str(exc.errors()[:1]))

    @app.get("/api/state")
    def get_state():
        return JSONResponse(service.snapshot())

    @app.get("/api/health")
    def get_health():
        health = service.snapshot().get("health")
        if health is None:
            return api_error(503, "no_data", "no sensor data yet")
        return JSONResponse(health)

    @app.post("/api/water")
    def post_water(body: WaterBody):
        kind = CommandKind.WATER_START if body.action == "start" else CommandKind.WATER_STOP
        outcome = service.submit(kind)
        if not outcome.accepted:
            return api_error(409, outcome.code, outcome.message)
        return JSONResponse(outcome.to_dict(), status_code=202)

    @app.post("/api/security")
    def post_security(body: SecurityBody):
        kind = CommandKind.ARM if body.armed else CommandKind.DISARM
        outcome = service.submit(kind)
        return JSONResponse(outcome.to_dict()["security"])

    @app.get("/api/schedules")
    def get_schedules():
        return JSONResponse(service.snapshot()["slots"])

    @app.post("/api/schedules")
    def post_schedule(body: SlotBody):
        try:
            parse_time_of_day(body.time)
        except ValueError as exc:
            return api_error(400, "invalid_time", str(exc))
        outcome = service.submit(CommandKind.ADD_SLOT, {"time": body.time})
        if not outcome.accepted:
            return api_error(409, outcome.code, outcome.message)
        return JSONResponse(outcome.to_dict()["slot"], status_code=201)

    @app.delete("/api/schedules/{slot_id}")
    def delete_schedule(slot_id: str):
        outcome = service.submit(CommandKind.REMOVE_SLOT, {"id": slot_id})
        if not outcome.accepted:
            return api_error(404, outcome.code, outcome.message)
        return Response(status_code=204)

    @app.get("/api/events")
    def get_events(since: int = 0):
        return JSONResponse(service.events_since(since))

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        q = service.subscribe()
        try:
            await ws.send_json({"type": "state", "state": service.snapshot()})
            while True:
                try:
                    events, view = await asyncio.to_thread(q.get, True, 0.5)
                except queue.Empty:
                    continue
                for event in events:
                    await ws.send_json({"type": "event", "event": event})
                if view is not None:
                    await ws.send_json({"type": "state", "state": view})
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            service.unsubscribe(q)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def open_port(host: str, port: int) -> socket.socket:
    """Bind the listening socket up front so port clashes fail cleanly and
    port 0 resolves to the chosen ephemeral port."""
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((host, port))
    except OSError as exc:
        sock.close()
        raise ServiceError(f"cannot bind {host}:{port}: {exc}") from exc
    sock.listen(128)
    return sock


def serve(scenario: Scenario, profile: ThresholdProfile | None = None,
          port: int = 8000, speed: float = 60.0, host: str = "127.0.0.1",
          data_dir: str | Path | None = None,
          ui_dir: str | Path | None = None) -> None:
    """Run the service until interrupted. Blocks the calling thread."""
    import uvicorn

    service = GardenService(scenario, profile, data_dir=data_dir, speed=speed)
    app = build_app(service, ui_dir=ui_dir)
    sock = open_port(host, port)
    actual_port = sock.getsockname()[1]
    print(f"verdant telemetry service listening on http://{host}:{actual_port} "
          f"(scenario={scenario.name}, speed=x{speed:g}, data={service.data_dir})",
          flush=True)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    server.run(sockets=[sock])
