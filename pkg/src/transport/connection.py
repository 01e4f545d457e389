# src/transport/connection.py

"""
Conexões com backends: processo filho via stdio ou socket TCP, mesmo framing.

Regras:
- no máximo uma requisição em andamento por conexão;
- uma thread leitora drena os frames para uma fila, então o backend nunca bloqueia
  escrevendo para um chamador lento;
- depois de BackendDied, Timeout ou ProtocolError a conexão fica inutilizável e
  toda chamada seguinte falha na hora com BackendDied.
"""

import itertools
import os
import queue
import socket
import subprocess
import sys
import threading
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

from src.config import Config, current_deadline_seconds
from src.models.errors import (
    BackendDied,
    ConnectError,
    HandshakeTimeout,
    ProtocolError,
    SpawnError,
    Timeout,
    TransportError,
)
from src.output import StreamClass
from src.utils.observability import log_with_context, track_performance
from .frames import (
    OUT,
    PONG,
    RET,
    SESSION,
    STATUS_OK,
    Frame,
    Reply,
    decode_frame,
    encode_frame,
    ping_request,
)

logger = log_with_context(component="Transport")

OutputCallback = Callable[[StreamClass, str], None]

PROJECT_ROOT = Path(__file__).resolve().parents[2]

_EOF = object()


def default_backend_command() -> List[str]:
    """O miniprover embutido, iniciado pelo próprio interpretador."""
    return [sys.executable, "-m", "src", "miniprover"]


def backend_environment() -> dict:
    env = dict(os.environ)
    existing = env.get("PYTHONPATH")
    env["PYTHONPATH"] = str(PROJECT_ROOT) + (os.pathsep + existing if existing else "")
    return env


def parse_address(address: Union[str, Tuple[str, int]]) -> Tuple[str, int]:
    if isinstance(address, tuple):
        return address[0], int(address[1])
    text = address[len("tcp://"):] if address.startswith("tcp://") else address
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise ValueError(f"endereço inválido (esperado HOST:PORT): {address!r}")
    return host or "127.0.0.1", int(port)


class Connection:
    """Interface comum: `roundtrip(request, on_output) -> Reply`."""

    def __init__(self, deadline: Optional[float] = None):
        self.deadline = deadline
        self._ids = itertools.count(1)
        self._lock = threading.Lock()
        self._dead_reason: Optional[str] = None

    @property
    def alive(self) -> bool:
        return self._dead_reason is None

    def _mark_dead(self, reason: str) -> None:
        if self._dead_reason is None:
            self._dead_reason = reason
            logger.warning("connection_marked_dead", reason=reason)

    def _ensure_alive(self) -> None:
        if self._dead_reason is not None:
            raise BackendDied(f"conexão indisponível: {self._dead_reason}")

    def _resolve_deadline(self, deadline: Optional[float]) -> float:
        if deadline is not None:
            return deadline
        if self.deadline is not None:
            return self.deadline
        return current_deadline_seconds()

    @staticmethod
    def _interpret(frame: Frame, request_id: int, on_output: Optional[OutputCallback]) -> Optional[Reply]:
        """Trata um frame recebido; devolve a Reply quando ele é terminal."""
        if frame.id != request_id:
            raise ProtocolError(f"frame com id {frame.id} durante a requisição {request_id}")
        if frame.kind == OUT:
            if on_output is not None:
                on_output(StreamClass.from_keyword(frame.args[0]), frame.args[1])
            return None
        if frame.kind == RET:
            return Reply(frame.status, frame.payload)
        if frame.kind == PONG:
            return Reply(STATUS_OK)
        if frame.kind == SESSION:
            return Reply(STATUS_OK, frame.args[0])
        raise ProtocolError(f"frame inesperado do backend: {frame.kind}")

    def roundtrip(self, request: Frame, on_output: Optional[OutputCallback] = None,
                  deadline: Optional[float] = None) -> Reply:
        raise NotImplementedError

    def ping(self, deadline: Optional[float] = None) -> None:
        self.roundtrip(ping_request(), deadline=deadline)

    def close(self) -> None:
        self._mark_dead("closed")

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()


class StreamConnection(Connection):
    """Conexão sobre um par de streams de bytes com uma thread leitora."""

    def __init__(self, reader, deadline: Optional[float] = None, name: str = "backend"):
        super().__init__(deadline)
        self._reader = reader
        self._frames: "queue.Queue" = queue.Queue()
        self._reader_thread = threading.Thread(
            target=self._read_loop, name=f"{name}-reader", daemon=True
        )
        self._reader_thread.start()

    def _read_loop(self) -> None:
        try:
            for line in iter(self._reader.readline, b""):
                if not line.strip():
                    continue
                try:
                    self._frames.put(decode_frame(line))
                except ProtocolError as e:
                    self._frames.put(e)
        except (OSError, ValueError):
            pass
        finally:
            self._frames.put(_EOF)

    def _write(self, data: bytes) -> None:
        raise NotImplementedError

    def _shutdown(self) -> None:
        """Libera o recurso subjacente (processo ou socket)."""

    def _fail(self, error: TransportError) -> TransportError:
        self._mark_dead(str(error))
        self._shutdown()
        return error

    def roundtrip(self, request: Frame, on_output: Optional[OutputCallback] = None,
                  deadline: Optional[float] = None) -> Reply:
        with self._lock:
            self._ensure_alive()
            frame = request.with_id(next(self._ids))
            timeout = self._resolve_deadline(deadline)
            limit = time.monotonic() + timeout
            try:
                self._write(encode_frame(frame))
            except (OSError, ValueError) as e:
                raise self._fail(BackendDied(f"falha ao escrever no backend: {e}")) from e

            while True:
                remaining = limit - time.monotonic()
                try:
                    item = self._frames.get(timeout=max(remaining, 0.0))
                except queue.Empty:
                    raise self._fail(Timeout(f"sem resposta para {frame.kind} #{frame.id} em {timeout:.3f}s"))
                if item is _EOF:
                    self._frames.put(_EOF)
                    raise self._fail(BackendDied("o backend encerrou a conexão"))
                if isinstance(item, ProtocolError):
                    raise self._fail(item)
                try:
                    reply = self._interpret(item, frame.id, on_output)
                except (ProtocolError, ValueError) as e:
                    raise self._fail(e if isinstance(e, ProtocolError) else ProtocolError(str(e)))
                if reply is not None:
                    return reply

    def close(self) -> None:
        self._mark_dead("closed")
        self._shutdown()


class StdioConnection(StreamConnection):
    def __init__(self, process: subprocess.Popen, deadline: Optional[float] = None):
        self.process = process
        super().__init__(process.stdout, deadline, name=f"stdio-{process.pid}")

    @property
    def pid(self) -> int:
        return self.process.pid

    @property
    def alive(self) -> bool:
        return super().alive and self.process.poll() is None

    def _write(self, data: bytes) -> None:
        self.process.stdin.write(data)
        self.process.stdin.flush()

    def _shutdown(self) -> None:
        try:
            self.process.stdin.close()
        except (OSError, ValueError):
            pass
        if self.process.poll() is None:
            self.process.terminate()
            try:
                self.process.wait(timeout=2)
            except subprocess.TimeoutExpired:
                self.process.kill()
                self.process.wait()


class TcpConnection(StreamConnection):
    def __init__(self, sock: socket.socket, deadline: Optional[float] = None):
        self._sock = sock
        host, port = sock.getpeername()[:2]
        super().__init__(sock.makefile("rb"), deadline, name=f"tcp-{host}:{port}")

    def _write(self, data: bytes) -> None:
        self._sock.sendall(data)

    def _shutdown(self) -> None:
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()


def _handshake(conn: StreamConnection, handshake_timeout: Optional[float]) -> None:
    timeout = handshake_timeout if handshake_timeout is not None else Config.HANDSHAKE_TIMEOUT_MS / 1000.0
    try:
        conn.ping(deadline=timeout)
    except Timeout as e:
        raise HandshakeTimeout(f"sem pong em {timeout:.3f}s") from e


@track_performance
def spawn_stdio_backend(command: Optional[Sequence[str]] = None, *, deadline: Optional[float] = None,
                        handshake_timeout: Optional[float] = None) -> StdioConnection:
    """Inicia o backend; stdin/stdout carregam frames e o stderr do filho é herdado."""
    argv = list(command) if command else default_backend_command()
    try:
        process = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            env=backend_environment(),
        )
    except (OSError, ValueError) as e:
        raise SpawnError(f"não foi possível iniciar {argv!r}: {e}") from e

    conn = StdioConnection(process, deadline)
    try:
        _handshake(conn, handshake_timeout)
    except BackendDied as e:
        conn.close()
        raise SpawnError(f"o backend {argv!r} encerrou durante o handshake") from e
    except TransportError:
        conn.close()
        raise
    logger.info("backend_spawned", argv=argv, pid=process.pid)
    return conn


def connect_tcp(address: Union[str, Tuple[str, int]], *, deadline: Optional[float] = None,
                handshake_timeout: Optional[float] = None) -> TcpConnection:
    host, port = parse_address(address)
    try:
        sock = socket.create_connection((host, port), timeout=handshake_timeout or 5.0)
    except OSError as e:
        raise ConnectError(f"não foi possível conectar em {host}:{port}: {e}") from e
    sock.settimeout(None)
    conn = TcpConnection(sock, deadline)
    try:
        _handshake(conn, handshake_timeout)
    except BackendDied as e:
        conn.close()
        raise ConnectError(f"{host}:{port} encerrou a conexão durante o handshake") from e
    except TransportError:
        conn.close()
        raise
    return conn


def roundtrip(conn: Connection, request: Frame, on_output: Optional[OutputCallback] = None) -> Reply:
    return conn.roundtrip(request, on_output)
