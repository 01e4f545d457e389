# src/output/control.py

"""
Controle de saída do prover.

O backend marca cada trecho de saída com a sua classe de stream (comment window,
standard-co, proofs-co) e o bridge decide, por chamada, para onde cada trecho vai:
descartado, capturado, repassado ou capturado e repassado. O buffer de captura é
único para as três classes e é limpo no início de cada chamada do bridge e a cada
leitura.

Quiet mode é um estado da sessão. Ao ligar/desligar, os hooks registrados por nome
devolvem formas que são avaliadas no backend (ex.: zerar a verbosidade).
"""

import sys
from collections import OrderedDict
from enum import Enum
from typing import Callable, Dict, List, Optional, Protocol, Sequence, TextIO, Tuple, Union

from src.models.errors import BridgeError
from src.sexpr import Keyword, SExpr
from src.utils.observability import log_with_context

logger = log_with_context(component="OutputControl")


class StreamClass(Enum):
    COMMENT_WINDOW = "comment-window"
    STANDARD_CO = "standard-co"
    PROOFS_CO = "proofs-co"

    @property
    def keyword(self) -> Keyword:
        return Keyword(self.value)

    @classmethod
    def from_keyword(cls, value: SExpr) -> "StreamClass":
        if not isinstance(value, Keyword):
            raise ValueError(f"classe de stream deve ser keyword: {value!r}")
        return cls(value.name)


class SinkPolicy(Enum):
    PASSTHROUGH = "passthrough"
    DISCARD = "discard"
    CAPTURE = "capture"
    CAPTURE_AND_PASSTHROUGH = "capture-and-passthrough"

    @property
    def captures(self) -> bool:
        return self in (SinkPolicy.CAPTURE, SinkPolicy.CAPTURE_AND_PASSTHROUGH)

    @property
    def passes_through(self) -> bool:
        return self in (SinkPolicy.PASSTHROUGH, SinkPolicy.CAPTURE_AND_PASSTHROUGH)


_POLICY_TABLE = {
    (False, False): SinkPolicy.PASSTHROUGH,
    (True, False): SinkPolicy.DISCARD,
    (False, True): SinkPolicy.CAPTURE_AND_PASSTHROUGH,
    (True, True): SinkPolicy.CAPTURE,
}


def policy_for(stream_class: StreamClass, quiet: bool, capture: bool) -> SinkPolicy:
    """Mesma tabela para as três classes."""
    return _POLICY_TABLE[(bool(quiet), bool(capture))]


class CaptureBuffer:
    def __init__(self):
        self._segments: List[Tuple[StreamClass, str]] = []

    def append(self, stream_class: StreamClass, text: str) -> None:
        self._segments.append((stream_class, text))

    def clear(self) -> None:
        self._segments = []

    @property
    def segments(self) -> List[Tuple[StreamClass, str]]:
        return list(self._segments)

    def text(self) -> str:
        return "".join(text for _, text in self._segments)

    def drain(self) -> str:
        captured = self.text()
        self._segments = []
        return captured


HookCallback = Callable[..., Sequence[SExpr]]


class HookRegistry:
    """
    Hooks de quiet mode por nome.

    On-hooks e off-hooks têm ordens independentes: cada lista segue a ordem em
    que o nome recebeu o primeiro hook daquele tipo. Redefinir um hook mantém a
    posição; `remove` tira o nome das duas listas.
    """

    def __init__(self):
        self._on: "OrderedDict[Keyword, HookCallback]" = OrderedDict()
        self._off: "OrderedDict[Keyword, HookCallback]" = OrderedDict()

    @staticmethod
    def _key(name: Union[Keyword, str]) -> Keyword:
        return name if isinstance(name, Keyword) else Keyword(name.lstrip(":"))

    def add_on_hook(self, name, hook: HookCallback) -> None:
        self._on[self._key(name)] = hook

    def add_off_hook(self, name, hook: HookCallback) -> None:
        self._off[self._key(name)] = hook

    def remove(self, name) -> None:
        key = self._key(name)
        self._on.pop(key, None)
        self._off.pop(key, None)

    def on_hooks(self) -> List[Tuple[Keyword, HookCallback]]:
        return list(self._on.items())

    def off_hooks(self) -> List[Tuple[Keyword, HookCallback]]:
        return list(self._off.items())

    def __len__(self) -> int:
        return len(self._on.keys() | self._off.keys())


class OutputControl:
    """Estado de saída de uma sessão: quiet/capture, políticas da chamada corrente e buffer."""

    def __init__(self, passthrough: Optional[TextIO] = None):
        self.buffer = CaptureBuffer()
        self.quiet = False
        self.capture = False
        self._passthrough = passthrough
        self._passthrough_closed = False
        self._policies: Dict[StreamClass, SinkPolicy] = {
            stream_class: SinkPolicy.PASSTHROUGH for stream_class in StreamClass
        }

    def begin_call(self, capture: bool) -> Dict[StreamClass, SinkPolicy]:
        self.buffer.clear()
        self._policies = {
            stream_class: policy_for(stream_class, self.quiet, capture)
            for stream_class in StreamClass
        }
        return dict(self._policies)

    def policy(self, stream_class: StreamClass) -> SinkPolicy:
        return self._policies[stream_class]

    def route(self, stream_class: StreamClass, text: str) -> None:
        policy = self._policies[stream_class]
        if policy.captures:
            self.buffer.append(stream_class, text)
        if policy.passes_through:
            self._emit(text)

    def _emit(self, text: str) -> None:
        if self._passthrough_closed:
            return
        destination = self._passthrough if self._passthrough is not None else sys.stdout
        try:
            destination.write(text)
            destination.flush()
        except (ValueError, OSError) as e:
            # destino fechado: passa a se comportar como Discard
            self._passthrough_closed = True
            logger.warning("passthrough_closed", error=str(e))


class QuietModeHost(Protocol):
    output: OutputControl
    hooks: HookRegistry

    def run_internal_forms(self, forms: Sequence[SExpr]) -> bool: ...


def route_output(session: QuietModeHost, stream_class: StreamClass, text: str) -> None:
    session.output.route(stream_class, text)


def get_captured_output(session: QuietModeHost) -> str:
    return session.output.buffer.drain()


def add_quiet_mode_on_hook(session: QuietModeHost, name, hook: HookCallback) -> None:
    session.hooks.add_on_hook(name, hook)


def add_quiet_mode_off_hook(session: QuietModeHost, name, hook: HookCallback) -> None:
    session.hooks.add_off_hook(name, hook)


def remove_hook(session: QuietModeHost, name) -> None:
    session.hooks.remove(name)


def set_quiet_mode(session: QuietModeHost, on: bool) -> None:
    """
    Liga/desliga quiet mode. Só quando o estado muda: roda os hooks na ordem de
    registro e avalia as formas devolvidas no backend, com a saída descartada.
    Falha de um hook vira warning e o estado muda mesmo assim.
    """
    on = bool(on)
    if session.output.quiet == on:
        return
    hooks = session.hooks.on_hooks() if on else session.hooks.off_hooks()
    for name, hook in hooks:
        try:
            forms = list(hook(session) or ())
            if forms and not session.run_internal_forms(forms):
                logger.warning("quiet_mode_hook_failed", hook=name.name, quiet=on, reason="ld_error")
        except BridgeError:
            raise
        except Exception as e:
            logger.warning("quiet_mode_hook_failed", hook=name.name, quiet=on, error=str(e))
    session.output.quiet = on
    logger.info("quiet_mode_changed", quiet=on, hooks_run=len(hooks))


def quiet_mode_on(session: QuietModeHost) -> None:
    set_quiet_mode(session, True)


def quiet_mode_off(session: QuietModeHost) -> None:
    set_quiet_mode(session, False)


def capture_output_on(session: QuietModeHost) -> None:
    session.output.capture = True


def capture_output_off(session: QuietModeHost) -> None:
    session.output.capture = False
