# src/bridge/options.py

from typing import Any, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.errors import BridgeUsageError
from src.sexpr import Keyword, SExpr, list_items, print_sexpr, truthy

QUIET = Keyword("quiet")
CAPTURE_OUTPUT = Keyword("capture-output")
PROVER_STEP_LIMIT = Keyword("prover-step-limit")

# Nunca repassadas ao ld: ou são do bridge, ou o bridge as calcula.
RESERVED_OPTIONS = (
    QUIET,
    CAPTURE_OUTPUT,
    PROVER_STEP_LIMIT,
    Keyword("standard-co"),
    Keyword("proofs-co"),
    Keyword("ld-error-action"),
)


def _as_items(plist) -> Tuple[SExpr, ...]:
    if isinstance(plist, (list, tuple)):
        return tuple(plist)
    try:
        return list_items(plist)
    except TypeError:
        raise BridgeUsageError(f"plist de opções deve ser uma lista: {plist!r}")


def _pairs(plist) -> Sequence[Tuple[Keyword, SExpr]]:
    items = _as_items(plist)
    if len(items) % 2:
        raise BridgeUsageError(f"plist de opções malformada (tamanho ímpar): {print_sexpr(items)}")
    pairs = list(zip(items[::2], items[1::2]))
    for key, _ in pairs:
        if not isinstance(key, Keyword):
            raise BridgeUsageError(f"chave de opção deve ser keyword: {key!r}")
    return pairs


def strip_reserved_options(plist) -> Tuple[SExpr, ...]:
    """Remove as chaves reservadas mantendo a ordem das demais."""
    kept = []
    for key, value in _pairs(plist):
        if key not in RESERVED_OPTIONS:
            kept.extend([key, value])
    return tuple(kept)


class BridgeOptions(BaseModel):
    """Opções de uma chamada do bridge."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    quiet: bool = False
    capture_output: bool = False
    prover_step_limit: Optional[int] = Field(default=None, ge=0)
    extra_ld_options: Tuple[Any, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def _strip_extras(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("extra_ld_options"):
            data = dict(data)
            data["extra_ld_options"] = strip_reserved_options(data["extra_ld_options"])
        return data

    @classmethod
    def from_plist(cls, plist) -> "BridgeOptions":
        """Equivale a `&key quiet capture-output prover-step-limit &allow-other-keys`."""
        fields = {}
        seen = set()
        for key, value in _pairs(plist):
            if key in seen:
                continue
            seen.add(key)
            if key == QUIET:
                fields["quiet"] = truthy(value)
            elif key == CAPTURE_OUTPUT:
                fields["capture_output"] = truthy(value)
            elif key == PROVER_STEP_LIMIT:
                if not truthy(value):
                    continue
                if not isinstance(value, int) or isinstance(value, bool):
                    raise BridgeUsageError(f"prover-step-limit deve ser um inteiro: {value!r}")
                fields["prover_step_limit"] = value
        fields["extra_ld_options"] = strip_reserved_options(plist)
        try:
            return cls(**fields)
        except ValueError as e:
            raise BridgeUsageError(str(e)) from e
