# src/transport/frames.py

"""
Frames do protocolo: uma S-expression canônica por linha, UTF-8.

Requisições:  (ld <id> <forms> <options>)  (get-global <id> <symbol>)  (ping <id>)
              (get-default <id> <keyword>)  lê a tabela de defaults sem gastar passos
Respostas:    (out <id> <class> <text>)    (ret <id> <status> <payload>)  (pong <id>)
Pool:         (acquire <id> [:fresh])  (session <id> <sid>)  (release <id> <sid>)
              e ld/get-global/get-default com o <sid> logo após o <id>.

Cada requisição gera zero ou mais `out` seguidos de exatamente um frame terminal
(`ret`, `pong` ou `session`) com o mesmo id.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

from src.models.errors import ParseError, ProtocolError
from src.output import SinkPolicy, StreamClass
from src.sexpr import NIL, Keyword, SExpr, Symbol, list_items, make_list, print_sexpr, read_sexpr

STATUS_OK = Keyword("ok")
STATUS_ERROR = Keyword("error")
EOF = Keyword("eof")
FRESH = Keyword("fresh")

PING, PONG, LD, GET_GLOBAL, GET_DEFAULT = "ping", "pong", "ld", "get-global", "get-default"
OUT, RET = "out", "ret"
ACQUIRE, SESSION, RELEASE = "acquire", "session", "release"

# número de argumentos depois do id (sem sid)
_ARITY = {
    PING: (0,), PONG: (0,), LD: (2,), GET_GLOBAL: (1,), GET_DEFAULT: (1,),
    OUT: (2,), RET: (2,), ACQUIRE: (0, 1), SESSION: (1,), RELEASE: (1,),
}
SESSION_KINDS = (LD, GET_GLOBAL, GET_DEFAULT)
TERMINAL_KINDS = (RET, PONG, SESSION)


class MalformedFrame(ProtocolError):
    """Frame ilegível; `frame_id` guarda o id quando ele é recuperável."""

    def __init__(self, message: str, frame_id: Optional[int] = None):
        super().__init__(message)
        self.frame_id = frame_id


@dataclass(frozen=True)
class Frame:
    kind: str
    id: int
    args: Tuple[SExpr, ...] = ()
    sid: Optional[str] = None

    def with_id(self, frame_id: int) -> "Frame":
        return replace(self, id=frame_id)

    def without_sid(self) -> "Frame":
        return replace(self, sid=None)

    def to_sexpr(self) -> SExpr:
        parts = [Symbol(self.kind), self.id]
        if self.sid is not None:
            parts.append(self.sid)
        parts.extend(self.args)
        return tuple(parts)

    @property
    def status(self) -> Keyword:
        return self.args[0]

    @property
    def payload(self) -> SExpr:
        return self.args[1]


@dataclass(frozen=True)
class Reply:
    status: Keyword
    payload: SExpr = NIL

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def is_eof(self) -> bool:
        return self.ok and self.payload == EOF


class ChannelDirective(Enum):
    EMIT = "emit"
    SUPPRESS = "suppress"

    @property
    def keyword(self) -> Keyword:
        return Keyword(self.value)

    @classmethod
    def for_policy(cls, policy: SinkPolicy) -> "ChannelDirective":
        # a supressão acontece na origem: nem um frame `out` é produzido
        return cls.SUPPRESS if policy is SinkPolicy.DISCARD else cls.EMIT


def directives_plist(directives: dict) -> Tuple[SExpr, ...]:
    plist = []
    for stream_class in StreamClass:
        plist.extend([stream_class.keyword, directives[stream_class].keyword])
    return tuple(plist)


# --- construtores (o id real é atribuído pela conexão) ---

def ping_request() -> Frame:
    return Frame(PING, 0)


def ld_request(forms: Sequence[SExpr], options: Union[Sequence[SExpr], SExpr] = (), sid: Optional[str] = None) -> Frame:
    if not isinstance(options, tuple):
        options = tuple(options) if isinstance(options, list) else list_items(options)
    return Frame(LD, 0, (make_list(forms), make_list(options)), sid)


def get_global_request(symbol: Symbol, sid: Optional[str] = None) -> Frame:
    return Frame(GET_GLOBAL, 0, (symbol,), sid)


def get_default_request(key: Keyword, sid: Optional[str] = None) -> Frame:
    return Frame(GET_DEFAULT, 0, (key,), sid)


def acquire_request(fresh: bool = False) -> Frame:
    return Frame(ACQUIRE, 0, (FRESH,) if fresh else ())


def release_request(sid: str) -> Frame:
    return Frame(RELEASE, 0, (sid,))


def pong_frame(frame_id: int) -> Frame:
    return Frame(PONG, frame_id)


def out_frame(frame_id: int, stream_class: StreamClass, text: str) -> Frame:
    return Frame(OUT, frame_id, (stream_class.keyword, text))


def ret_frame(frame_id: int, status: Keyword, payload: SExpr = NIL) -> Frame:
    return Frame(RET, frame_id, (status, payload))


def ok_frame(frame_id: int, payload: SExpr = NIL) -> Frame:
    return ret_frame(frame_id, STATUS_OK, payload)


def error_frame(frame_id: int, code: str) -> Frame:
    return ret_frame(frame_id, STATUS_ERROR, Keyword(code))


def session_frame(frame_id: int, sid: str) -> Frame:
    return Frame(SESSION, frame_id, (sid,))


# --- codec ---

def frame_from_sexpr(expr: SExpr) -> Frame:
    if not isinstance(expr, tuple) or len(expr) < 2:
        raise MalformedFrame(f"frame deve ser uma lista (tipo id ...): {expr!r}")
    head, frame_id, rest = expr[0], expr[1], expr[2:]
    recoverable = frame_id if isinstance(frame_id, int) and frame_id > 0 else None
    if not isinstance(head, Symbol) or head.package is not None or head.name not in _ARITY:
        raise MalformedFrame(f"tipo de frame desconhecido: {print_sexpr(head)}", recoverable)
    if recoverable is None:
        raise MalformedFrame(f"id de frame inválido: {frame_id!r}")

    kind = head.name
    sid = None
    if kind in SESSION_KINDS and len(rest) == _ARITY[kind][0] + 1:
        sid, rest = rest[0], rest[1:]
        if not isinstance(sid, str):
            raise MalformedFrame(f"sid deve ser string: {sid!r}", frame_id)
    if len(rest) not in _ARITY[kind]:
        raise MalformedFrame(f"aridade inválida para {kind}: {len(rest)}", frame_id)

    if kind == OUT:
        if not isinstance(rest[1], str):
            raise MalformedFrame("texto de `out` deve ser string", frame_id)
        try:
            StreamClass.from_keyword(rest[0])
        except ValueError as e:
            raise MalformedFrame(str(e), frame_id)
    elif kind == RET and rest[0] not in (STATUS_OK, STATUS_ERROR):
        raise MalformedFrame(f"status inválido: {rest[0]!r}", frame_id)
    elif kind in (SESSION, RELEASE) and not isinstance(rest[0], str):
        raise MalformedFrame(f"sid deve ser string: {rest[0]!r}", frame_id)
    elif kind == ACQUIRE and rest and rest[0] != FRESH:
        raise MalformedFrame(f"variante de acquire desconhecida: {rest[0]!r}", frame_id)
    return Frame(kind, frame_id, tuple(rest), sid)


def encode_frame(frame: Frame) -> bytes:
    return (print_sexpr(frame.to_sexpr()) + "\n").encode("utf-8")


def decode_frame(line: Union[bytes, str]) -> Frame:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedFrame(f"frame não é UTF-8 válido: {e}")
    try:
        expr = read_sexpr(line)
    except ParseError as e:
        raise MalformedFrame(f"frame ilegível: {e}")
    return frame_from_sexpr(expr)
