# src/miniprover/server.py

"""
Processo miniprover: lê frames de requisição do stdin e escreve respostas no stdout.

Um request por vez, na ordem de chegada. Diagnósticos vão para o stderr.
"""

import sys
from typing import BinaryIO, Callable, Optional

from src.models.errors import ErrorCodes
from src.sexpr import NIL, Keyword, Symbol, list_items
from src.transport.frames import (
    GET_DEFAULT,
    GET_GLOBAL,
    LD,
    PING,
    Frame,
    MalformedFrame,
    decode_frame,
    encode_frame,
    error_frame,
    ok_frame,
    out_frame,
    pong_frame,
    ret_frame,
)
from src.utils.observability import log_with_context
from .ld import run_ld
from .world import GlobalsTable, World

logger = log_with_context(component="MiniProver")

Send = Callable[[Frame], None]


class MiniProver:
    """Estado de um backend: world corrente e tabela de globais."""

    def __init__(self, world: Optional[World] = None, globals: Optional[GlobalsTable] = None):
        self.world = world or World()
        self.globals = globals or GlobalsTable()

    def handle(self, frame: Frame, send: Send) -> None:
        if frame.sid is not None:
            # sessões são assunto do pool
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))
        elif frame.kind == PING:
            send(pong_frame(frame.id))
        elif frame.kind == LD:
            self._handle_ld(frame, send)
        elif frame.kind == GET_GLOBAL:
            self._handle_get_global(frame, send)
        elif frame.kind == GET_DEFAULT:
            self._handle_get_default(frame, send)
        else:
            logger.warning("unexpected_frame_kind", kind=frame.kind, id=frame.id)
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))

    def _handle_ld(self, frame: Frame, send: Send) -> None:
        try:
            forms = list_items(frame.args[0])
            options = list_items(frame.args[1])
        except TypeError:
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))
            return

        def emit(stream_class, text):
            send(out_frame(frame.id, stream_class, text))

        status, payload, self.world = run_ld(forms, options, self.world, self.globals, emit)
        send(ret_frame(frame.id, status, payload))

    def _handle_get_global(self, frame: Frame, send: Send) -> None:
        name = frame.args[0]
        if not isinstance(name, Symbol):
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))
        elif name in self.globals:
            send(ok_frame(frame.id, self.globals.get(name)))
        else:
            send(error_frame(frame.id, ErrorCodes.UNBOUND_GLOBAL))

    def _handle_get_default(self, frame: Frame, send: Send) -> None:
        # leitura direta: não passa pelo avaliador nem pelo orçamento de passos
        key = frame.args[0]
        if not isinstance(key, Keyword):
            send(error_frame(frame.id, ErrorCodes.PROTOCOL))
        else:
            send(ok_frame(frame.id, self.world.defaults.get(key, NIL)))

    def handle_line(self, line, send: Send) -> None:
        try:
            frame = decode_frame(line)
        except MalformedFrame as e:
            if e.frame_id is not None:
                send(error_frame(e.frame_id, ErrorCodes.PROTOCOL))
            else:
                logger.warning("malformed_frame", error=str(e))
            return
        self.handle(frame, send)


def serve_stdio(stdin: Optional[BinaryIO] = None, stdout: Optional[BinaryIO] = None) -> int:
    """Loop principal; retorna 0 quando o stdin chega ao fim."""
    stdin = stdin or sys.stdin.buffer
    stdout = stdout or sys.stdout.buffer
    prover = MiniProver()

    def send(frame: Frame) -> None:
        stdout.write(encode_frame(frame))
        stdout.flush()

    try:
        for line in iter(stdin.readline, b""):
            if line.strip():
                prover.handle_line(line, send)
    except BrokenPipeError:
        logger.warning("stdout_closed")
    return 0
