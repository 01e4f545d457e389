# src/pool/client.py

"""
Cliente do pool: aluga sessões e roda chamadas do bridge num worker remoto.

    client = PoolClient("127.0.0.1:7070")
    sid = client.acquire()
    client.submit(sid, "compute", "(+ 1 2)")   # QueryResult(erp=False, val=3)
    client.release(sid)
"""

from contextlib import contextmanager
from dataclasses import replace
from typing import Dict, Iterator, Optional, TextIO

from src.bridge import BridgeOptions, QueryResult, Session
from src.bridge.interface import MODES
from src.models.errors import (
    BackendUnavailable,
    BridgeUsageError,
    ErrorCodes,
    PoolExhausted,
    ProtocolError,
    UnknownSession,
    WorkerDied,
)
from src.sexpr import Keyword
from src.transport.connection import Connection, OutputCallback, connect_tcp
from src.transport.frames import SESSION_KINDS, STATUS_ERROR, Frame, Reply, acquire_request, release_request

_POOL_ERRORS = {
    Keyword(ErrorCodes.WORKER_DIED): WorkerDied,
    Keyword(ErrorCodes.UNKNOWN_SESSION): UnknownSession,
    Keyword(ErrorCodes.POOL_EXHAUSTED): PoolExhausted,
}


def _raise_pool_error(reply: Reply, context: str) -> None:
    if reply.status == STATUS_ERROR and reply.payload in _POOL_ERRORS:
        raise _POOL_ERRORS[reply.payload](context)


class PoolSessionConnection(Connection):
    """Conexão lógica de uma sessão: injeta o sid em cada requisição."""

    def __init__(self, client: "PoolClient", sid: str):
        super().__init__()
        self.client = client
        self.sid = sid

    @property
    def alive(self) -> bool:
        return super().alive and self.client.connection.alive

    def roundtrip(self, request: Frame, on_output: Optional[OutputCallback] = None,
                  deadline: Optional[float] = None) -> Reply:
        with self._lock:
            self._ensure_alive()
            if request.kind in SESSION_KINDS:
                request = replace(request, sid=self.sid)
            reply = self.client.connection.roundtrip(request, on_output, deadline)
            try:
                _raise_pool_error(reply, f"sessão {self.sid}")
            except (WorkerDied, UnknownSession) as e:
                self._mark_dead(f"{type(e).__name__}: {self.sid}")
                raise
            return reply

    def close(self) -> None:
        # fechar a sessão não fecha a conexão TCP do cliente
        self._mark_dead("closed")


class PoolClient:
    def __init__(self, address, deadline: Optional[float] = None, handshake_timeout: Optional[float] = None):
        self.connection = connect_tcp(address, deadline=deadline, handshake_timeout=handshake_timeout)
        self._sessions: Dict[str, Session] = {}

    def acquire(self, fresh: bool = False) -> str:
        reply = self.connection.roundtrip(acquire_request(fresh))
        _raise_pool_error(reply, "acquire")
        if not reply.ok or not isinstance(reply.payload, str):
            raise ProtocolError(f"resposta inesperada ao acquire: {reply}")
        return reply.payload

    def release(self, sid: str) -> None:
        session = self._sessions.pop(sid, None)
        if session is not None:
            session.connection.close()
        reply = self.connection.roundtrip(release_request(sid))
        _raise_pool_error(reply, "release")

    def session_for(self, sid: str, passthrough: Optional[TextIO] = None) -> Session:
        if sid not in self._sessions:
            self._sessions[sid] = Session(PoolSessionConnection(self, sid), passthrough)
        return self._sessions[sid]

    def submit(self, sid: str, mode: str, form, opts: Optional[BridgeOptions] = None) -> QueryResult:
        """Uma chamada do bridge na sessão `sid`; mesmo resultado de uma sessão local."""
        try:
            call = MODES[mode]
        except KeyError:
            raise BridgeUsageError(f"modo desconhecido: {mode!r}")
        try:
            return call(self.session_for(sid), form, opts)
        except BackendUnavailable as e:
            if isinstance(e.__cause__, (WorkerDied, UnknownSession)):
                raise e.__cause__ from None
            raise

    @contextmanager
    def session(self, fresh: bool = False, passthrough: Optional[TextIO] = None) -> Iterator[Session]:
        sid = self.acquire(fresh)
        session = self.session_for(sid, passthrough)
        try:
            yield session
        finally:
            if self.connection.alive:
                try:
                    self.release(sid)
                except (UnknownSession, WorkerDied):
                    pass

    def close(self) -> None:
        self._sessions.clear()
        self.connection.close()

    def __enter__(self) -> "PoolClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
