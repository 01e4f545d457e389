# src/miniprover/values.py

"""
Valores e resultados de avaliação do miniprover.

Um valor é uma S-expression comum ou um stobj (só existe `state`). Múltiplos
valores (`mv`) são um objeto próprio e nunca aparecem dentro de listas.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from src.sexpr import NIL, SExpr, Symbol, is_nil


@dataclass(frozen=True)
class Stobj:
    name: Symbol

    def __repr__(self) -> str:
        return f"<stobj {self.name.name}>"


STATE = Stobj(Symbol("state"))

Value = Union[SExpr, Stobj]


@dataclass(frozen=True)
class MultipleValues:
    values: Tuple[Value, ...]


# --- resultados de eval_form ---

@dataclass(frozen=True)
class Values:
    values: Tuple[Value, ...]

    @property
    def signature(self) -> Tuple[SExpr, ...]:
        return realized_signature(self.values)


@dataclass(frozen=True)
class SoftError:
    ctx: SExpr = NIL
    msg: str = ""


@dataclass(frozen=True)
class HardError:
    reason: str


@dataclass(frozen=True)
class StepLimitExceeded:
    pass


EvalOutcome = Union[Values, SoftError, HardError, StepLimitExceeded]


def realized_signature(values: Tuple[Value, ...]) -> Tuple[SExpr, ...]:
    """`nil` para valores comuns, o nome do stobj nas posições de stobj."""
    return tuple(v.name if isinstance(v, Stobj) else NIL for v in values)


def is_error_triple(values: Tuple[Value, ...]) -> bool:
    return realized_signature(values) == (NIL, NIL, STATE.name)


def is_ordinary(value: object) -> bool:
    return not isinstance(value, (Stobj, MultipleValues))


def error_triple(erp: SExpr, val: SExpr) -> MultipleValues:
    return MultipleValues((erp, val, STATE))


def soft_error_outcome(outcome: EvalOutcome, last_soft: Optional[SoftError] = None) -> EvalOutcome:
    """Um error triple com erp não-nil é erro soft; o resto passa intacto."""
    if isinstance(outcome, Values) and is_error_triple(outcome.values) and not is_nil(outcome.values[0]):
        return last_soft or SoftError()
    return outcome


# --- sinais internos do avaliador ---

class HardErrorSignal(Exception):
    pass


class StepLimitSignal(Exception):
    pass
