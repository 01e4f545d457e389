# src/pool/server.py

"""
Servidor de pool: N processos backend atrás de um socket TCP.

Protocolo = o framing do transporte mais três frames de sessão:
    (acquire <id> [:fresh]) -> (session <id> <sid>)
    (release <id> <sid>)    -> (ret <id> :ok nil)
    (ld|get-global|get-default <id> <sid> ...) vão para o worker alugado.

Cada worker atende um aluguel por vez e uma requisição por vez. Um monitor
reinicia workers mortos (política "always"); a sessão de um worker que morreu
recebe :worker-died na próxima requisição e deixa de existir.
"""

import itertools
import socketserver
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Set

from src.models.errors import ErrorCodes, PoolExhausted, TransportError, UnknownSession
from src.sexpr import NIL
from src.transport.connection import Connection, parse_address, spawn_stdio_backend
from src.transport.frames import (
    ACQUIRE,
    FRESH,
    PING,
    RELEASE,
    SESSION_KINDS,
    Frame,
    MalformedFrame,
    decode_frame,
    encode_frame,
    error_frame,
    ok_frame,
    out_frame,
    pong_frame,
    ret_frame,
    session_frame,
)
from src.utils.observability import correlation_ctx, log_with_context, track_performance
from .config import PoolConfig

logger = log_with_context(component="PoolServer")

Send = Callable[[Frame], None]


class LeaseState(Enum):
    FREE = "free"
    LEASED = "leased"
    DEAD = "dead"


@dataclass
class Worker:
    index: int
    connection: Optional[Connection]
    state: LeaseState = LeaseState.FREE
    sid: Optional[str] = None
    release_seq: int = 0
    restarts: int = 0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def alive(self) -> bool:
        return self.state is not LeaseState.DEAD and self.connection is not None and self.connection.alive

    @property
    def pid(self) -> Optional[int]:
        return getattr(self.connection, "pid", None)


class _ClientHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        pool: "PoolServer" = self.server.pool
        owned: Set[str] = set()
        write_lock = threading.Lock()

        def send(frame: Frame) -> None:
            with write_lock:
                self.wfile.write(encode_frame(frame))
                self.wfile.flush()

        try:
            for line in iter(self.rfile.readline, b""):
                if not line.strip():
                    continue
                try:
                    frame = decode_frame(line)
                except MalformedFrame as e:
                    if e.frame_id is not None:
                        send(error_frame(e.frame_id, ErrorCodes.PROTOCOL))
                    else:
                        logger.warning("client_malformed_frame", error=str(e))
                    continue
                pool.dispatch(frame, owned, send)
        except (ConnectionError, OSError) as e:
            logger.info("client_connection_lost", error=str(e))
        finally:
            pool.release_all(owned)


class _ThreadingServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True


class PoolServer:
    def __init__(self, config: PoolConfig,
                 connection_factory: Optional[Callable[[], Connection]] = None):
        self.config = config
        self._factory = connection_factory or (lambda: spawn_stdio_backend(config.backend_command))
        self.workers: List[Worker] = []
        self._sessions: Dict[str, Worker] = {}
        self._dead_sids: Set[str] = set()
        self._release_seq = itertools.count(1)
        self._cond = threading.Condition()
        self._stop = threading.Event()
        self._server: Optional[_ThreadingServer] = None
        self._threads: List[threading.Thread] = []
        self._status_server = None

    # --- ciclo de vida ---

    @track_performance
    def start(self) -> "PoolServer":
        self.workers = [Worker(i, self._factory()) for i in range(self.config.worker_count)]
        self._server = _ThreadingServer(parse_address(self.config.listen_address), _ClientHandler)
        self._server.pool = self
        self._spawn_thread(self._server.serve_forever, "pool-accept")
        self._spawn_thread(self._monitor_loop, "pool-monitor")
        if self.config.status_port:
            self._start_status_server(self.config.status_port)
        logger.info("pool_started", address=self.address, workers=self.config.worker_count)
        return self

    def _spawn_thread(self, target, name: str) -> None:
        thread = threading.Thread(target=target, name=name, daemon=True)
        thread.start()
        self._threads.append(thread)

    def _start_status_server(self, port: int) -> None:
        from werkzeug.serving import make_server
        from src.api import create_app

        host = parse_address(self.config.listen_address)[0]
        self._status_server = make_server(host, port, create_app(self))
        self._spawn_thread(self._status_server.serve_forever, "pool-status")
        logger.info("status_endpoint_started", host=host, port=self._status_server.server_port)

    @property
    def address(self):
        return self._server.server_address[:2] if self._server else None

    def wait(self) -> None:
        self._stop.wait()

    def shutdown(self) -> None:
        self._stop.set()
        if self._server is not None:
            self._server.shutdown()
            self._server.server_close()
        if self._status_server is not None:
            self._status_server.shutdown()
        for worker in self.workers:
            if worker.connection is not None:
                worker.connection.close()
        logger.info("pool_stopped")

    def __enter__(self) -> "PoolServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.shutdown()

    # --- consultas ---

    def live_worker_count(self) -> int:
        return sum(1 for w in self.workers if w.alive)

    def status(self) -> List[dict]:
        with self._cond:
            return [
                {
                    "index": w.index,
                    "pid": w.pid,
                    "state": w.state.value,
                    "alive": w.alive,
                    "restarts": w.restarts,
                }
                for w in self.workers
            ]

    def worker_for(self, sid: str) -> Optional[Worker]:
        with self._cond:
            return self._sessions.get(sid)

    # --- aluguel ---

    def acquire(self, fresh: bool = False) -> str:
        limit = time.monotonic() + self.config.max_acquire_wait
        with self._cond:
            while True:
                free = [w for w in self.workers if w.state is LeaseState.FREE and w.alive]
                if free:
                    # menos recentemente liberado primeiro; empate pelo índice
                    worker = min(free, key=lambda w: (w.release_seq, w.index))
                    break
                remaining = limit - time.monotonic()
                if remaining <= 0:
                    raise PoolExhausted(f"nenhum worker livre em {self.config.max_acquire_wait:.3f}s")
                self._cond.wait(remaining)
            sid = uuid.uuid4().hex
            worker.state = LeaseState.LEASED
            worker.sid = sid
            self._sessions[sid] = worker

        if fresh:
            with worker.lock:
                if not self._respawn(worker, reason="fresh"):
                    self.release(sid)
                    raise PoolExhausted("falha ao reiniciar o worker para :fresh")
        logger.info("session_acquired", sid=sid, worker=worker.index, fresh=fresh)
        return sid

    def release(self, sid: str) -> None:
        with self._cond:
            if sid in self._dead_sids:
                self._dead_sids.discard(sid)
                return
            worker = self._sessions.pop(sid, None)
            if worker is None:
                raise UnknownSession(sid)
            worker.sid = None
            if worker.state is LeaseState.LEASED:
                worker.state = LeaseState.FREE
                worker.release_seq = next(self._release_seq)
            self._cond.notify_all()
        logger.info("session_released", sid=sid, worker=worker.index)

    def release_all(self, sids: Set[str]) -> None:
        for sid in list(sids):
            try:
                self.release(sid)
            except UnknownSession:
                pass
        sids.clear()

    # --- despacho ---

    def dispatch(self, frame: Frame, owned: Set[str], send: Send) -> None:
        if frame.kind == PING:
            send(pong_frame(frame.id))
        elif frame.kind == ACQUIRE:
            try:
                sid = self.acquire(fresh=FRESH in frame.args)
            except PoolExhausted:
                send(error_frame(frame.id, ErrorCodes.POOL_EXHAUSTED))
                return
            owned.add(sid)
            send(session_frame(frame.id, sid))
        elif frame.kind == RELEASE:
            sid = frame.args[0]
            try:
                self.release(sid)
            except UnknownSession:
                send(error_frame(frame.id, ErrorCodes.UNKNOWN_SESSION))
                return
            owned.discard(sid)
            send(ok_frame(frame.id, NIL))
        elif frame.kind in SESSION_KINDS and frame.sid is not None:
            self.forward(frame, send)
        else:
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))

    def forward(self, frame: Frame, send: Send) -> None:
        sid = frame.sid
        with self._cond:
            if sid in self._dead_sids:
                self._dead_sids.discard(sid)
                send(error_frame(frame.id, ErrorCodes.WORKER_DIED))
                return
            worker = self._sessions.get(sid)
        if worker is None:
            send(error_frame(frame.id, ErrorCodes.UNKNOWN_SESSION))
            return

        correlation_ctx.set_correlation_id(sid)
        try:
            with worker.lock:
                if worker.sid != sid:
                    # o monitor pode ter invalidado a sessão enquanto esperávamos o worker
                    with self._cond:
                        died = sid in self._dead_sids
                        self._dead_sids.discard(sid)
                    send(error_frame(frame.id, ErrorCodes.WORKER_DIED if died else ErrorCodes.UNKNOWN_SESSION))
                    return

                def relay(stream_class, text):
                    send(out_frame(frame.id, stream_class, text))

                try:
                    reply = worker.connection.roundtrip(frame.without_sid(), relay)
                except TransportError as e:
                    logger.error("worker_died_during_request", worker=worker.index, error=str(e))
                    self._invalidate(worker, keep_sid_as_dead=False)
                    send(error_frame(frame.id, ErrorCodes.WORKER_DIED))
                    self._respawn(worker, reason="died")
                    return
            send(ret_frame(frame.id, reply.status, reply.payload))
        finally:
            correlation_ctx.clear()

    # --- falhas e reinício ---

    def _invalidate(self, worker: Worker, keep_sid_as_dead: bool) -> None:
        with self._cond:
            sid = worker.sid
            if sid is not None and self._sessions.get(sid) is worker:
                del self._sessions[sid]
                if keep_sid_as_dead:
                    self._dead_sids.add(sid)
            worker.sid = None
            worker.state = LeaseState.DEAD

    def _respawn(self, worker: Worker, reason: str) -> bool:
        """Chamado com `worker.lock` adquirido."""
        if worker.connection is not None:
            worker.connection.close()
        try:
            connection = self._factory()
        except TransportError as e:
            logger.error("worker_respawn_failed", worker=worker.index, reason=reason, error=str(e))
            with self._cond:
                worker.state = LeaseState.DEAD
            return False
        with self._cond:
            worker.connection = connection
            worker.restarts += 1
            if worker.state is LeaseState.DEAD:
                worker.state = LeaseState.FREE
                worker.release_seq = next(self._release_seq)
            self._cond.notify_all()
        logger.info("worker_respawned", worker=worker.index, reason=reason, pid=worker.pid)
        return True

    def _monitor_loop(self) -> None:
        while not self._stop.wait(self.config.monitor_interval):
            for worker in self.workers:
                if worker.alive:
                    continue
                # worker ocupado com uma requisição: quem a enviou trata a morte
                if not worker.lock.acquire(blocking=False):
                    continue
                try:
                    if not worker.alive:
                        logger.warning("worker_found_dead", worker=worker.index, sid=worker.sid)
                        self._invalidate(worker, keep_sid_as_dead=True)
                        self._respawn(worker, reason="monitor")
                finally:
                    worker.lock.release()


def serve(config: PoolConfig) -> None:
    """Sobe o pool e bloqueia até Ctrl+C."""
    pool = PoolServer(config)
    pool.start()
    try:
        pool.wait()
    except KeyboardInterrupt:
        logger.info("pool_interrupted")
    finally:
        pool.shutdown()
