# src/miniprover/ld.py

"""
O loop `ld`: avalia uma lista de formas em ordem e informa só sucesso (:eof) ou falha.

Falha (erro soft, erro hard, limite de passos) para a avaliação, devolve o world
ao snapshot tirado no início e responde :error com o motivo. Globais alterados
pelas formas já executadas permanecem.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple

from src.models.errors import ErrorCodes
from src.output import StreamClass
from src.sexpr import NIL, T, Keyword, SExpr, print_sexpr
from src.transport.frames import EOF, STATUS_ERROR, STATUS_OK, ChannelDirective
from src.utils.observability import log_with_context
from .evaluator import Emit, Evaluator
from .values import HardError, StepLimitExceeded, Values, soft_error_outcome
from .world import GlobalsTable, World

logger = log_with_context(component="MiniProverLd")

LD_ERROR_ACTION = Keyword("ld-error-action")
LD_PRE_EVAL_PRINT = Keyword("ld-pre-eval-print")
STRICT_ERROR_ACTION = Keyword("error")


class LdOptionError(ValueError):
    pass


@dataclass
class LdSettings:
    directives: Dict[StreamClass, ChannelDirective] = field(
        default_factory=lambda: {cls: ChannelDirective.EMIT for cls in StreamClass}
    )
    pre_eval_print: bool = False

    def sink(self, emit: Emit) -> Emit:
        """Filtra na origem as classes suprimidas."""
        def filtered(stream_class: StreamClass, text: str) -> None:
            if text and self.directives[stream_class] is ChannelDirective.EMIT:
                emit(stream_class, text)
        return filtered


def parse_ld_options(options: Sequence[SExpr]) -> LdSettings:
    """Plist de opções; na repetição de uma chave vale a primeira ocorrência."""
    if len(options) % 2:
        raise LdOptionError("plist de opções com tamanho ímpar")
    settings = LdSettings()
    seen = set()
    classes = {cls.keyword: cls for cls in StreamClass}
    for key, value in zip(options[::2], options[1::2]):
        if not isinstance(key, Keyword):
            raise LdOptionError(f"chave de opção não é keyword: {print_sexpr(key)}")
        if key in seen:
            continue
        seen.add(key)
        if key in classes:
            try:
                if not isinstance(value, Keyword):
                    raise ValueError(value)
                settings.directives[classes[key]] = ChannelDirective(value.name)
            except ValueError:
                raise LdOptionError(f"diretiva inválida para {key.name}: {print_sexpr(value)}")
        elif key == LD_ERROR_ACTION:
            if value != STRICT_ERROR_ACTION:
                raise LdOptionError(f"ld-error-action não suportado: {print_sexpr(value)}")
        elif key == LD_PRE_EVAL_PRINT:
            if value not in (T, NIL):
                raise LdOptionError(f"ld-pre-eval-print espera t ou nil: {print_sexpr(value)}")
            settings.pre_eval_print = value == T
        else:
            raise LdOptionError(f"opção de ld desconhecida: {key.name}")
    return settings


def run_ld(forms: Sequence[SExpr], options: Sequence[SExpr], world: World, globals: GlobalsTable,
           emit: Callable[[StreamClass, str], None]) -> Tuple[Keyword, SExpr, World]:
    try:
        settings = parse_ld_options(tuple(options))
    except LdOptionError as e:
        logger.warning("ld_bad_option", error=str(e))
        return STATUS_ERROR, Keyword(ErrorCodes.BAD_LD_OPTION), world

    sink = settings.sink(emit)
    working = world.copy()
    for index, form in enumerate(forms):
        if settings.pre_eval_print:
            sink(StreamClass.STANDARD_CO, print_sexpr(form) + "\n")
        evaluator = Evaluator(working, globals, working.step_limit, sink)
        outcome = soft_error_outcome(evaluator.run(form), evaluator.last_soft_error)
        if isinstance(outcome, Values):
            continue

        if isinstance(outcome, HardError):
            sink(StreamClass.STANDARD_CO, f"HARD ERROR: {outcome.reason}\n")
            code = ErrorCodes.HARD_ERROR
        elif isinstance(outcome, StepLimitExceeded):
            sink(StreamClass.STANDARD_CO, "Step limit exceeded.\n")
            code = ErrorCodes.STEP_LIMIT
        else:
            code = ErrorCodes.SOFT_ERROR
        logger.info("ld_failed", reason=code, form_index=index, steps=evaluator.steps_used)
        return STATUS_ERROR, Keyword(code), world

    return STATUS_OK, EOF, working
