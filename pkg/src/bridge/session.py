# src/bridge/session.py

"""
Sessão do bridge: uma conexão com o backend, o estado de saída e os hooks de quiet mode.

Uma chamada por vez; o `lease` (RLock) serializa chamadas vindas de threads
diferentes. Uma falha de transporte marca a sessão como morta e toda chamada
seguinte levanta BackendUnavailable.
"""

import threading
from typing import Optional, Sequence, TextIO

from src.models.errors import BackendUnavailable, TransportError
from src.output import HookRegistry, OutputControl, StreamClass
from src.sexpr import NIL, Keyword, SExpr, Symbol
from src.transport import (
    ChannelDirective,
    Connection,
    Reply,
    connect_tcp,
    get_default_request,
    get_global_request,
    ld_request,
    spawn_stdio_backend,
)
from src.transport.connection import OutputCallback
from src.transport.frames import directives_plist
from src.utils.observability import log_with_context

logger = log_with_context(component="BridgeSession")

RESULT_VAR = Symbol("command-result", package="prover-bridge")
ASSIGN = Symbol("assign")

LD_ERROR_ACTION_STRICT = (Keyword("ld-error-action"), Keyword("error"))
LD_QUIET_FLAGS = (Keyword("ld-pre-eval-print"), NIL)

SUPPRESS_ALL = directives_plist({cls: ChannelDirective.SUPPRESS for cls in StreamClass})


class Session:
    def __init__(self, connection: Connection, passthrough: Optional[TextIO] = None,
                 hooks: Optional[HookRegistry] = None):
        self.connection = connection
        self.output = OutputControl(passthrough)
        self.hooks = hooks if hooks is not None else HookRegistry()
        self.result_var = RESULT_VAR
        self.dead = False
        self.lease = threading.RLock()

    @property
    def alive(self) -> bool:
        return not self.dead and self.connection.alive

    def _roundtrip(self, request, on_output: Optional[OutputCallback] = None) -> Reply:
        if self.dead:
            raise BackendUnavailable("a sessão perdeu o backend")
        try:
            return self.connection.roundtrip(request, on_output)
        except TransportError as e:
            self.dead = True
            logger.error("session_backend_lost", error=str(e), error_type=type(e).__name__)
            raise BackendUnavailable(str(e)) from e

    def ld(self, forms: Sequence[SExpr], options: Sequence[SExpr],
           on_output: Optional[OutputCallback] = None) -> Reply:
        return self._roundtrip(ld_request(forms, tuple(options)), on_output)

    def get_global(self, symbol: Symbol) -> Reply:
        return self._roundtrip(get_global_request(symbol))

    def get_default(self, key: Keyword) -> Reply:
        return self._roundtrip(get_default_request(key))

    def run_internal_forms(self, forms: Sequence[SExpr]) -> bool:
        """Avalia formas internas com toda a saída suprimida; True quando o ld termina em :eof."""
        with self.lease:
            return self.ld(forms, SUPPRESS_ALL + LD_ERROR_ACTION_STRICT).is_eof

    def close(self) -> None:
        self.dead = True
        self.connection.close()

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # --- construtores ---

    @classmethod
    def spawn(cls, command: Optional[Sequence[str]] = None, passthrough: Optional[TextIO] = None,
              **connection_kwargs) -> "Session":
        return cls(spawn_stdio_backend(command, **connection_kwargs), passthrough)

    @classmethod
    def connect(cls, address, passthrough: Optional[TextIO] = None, **connection_kwargs) -> "Session":
        return cls(connect_tcp(address, **connection_kwargs), passthrough)

    @classmethod
    def in_process(cls, passthrough: Optional[TextIO] = None) -> "Session":
        from src.miniprover import InProcessConnection
        return cls(InProcessConnection(), passthrough)
