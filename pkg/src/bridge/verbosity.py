# src/bridge/verbosity.py

from typing import Dict, List

from src.output import HookRegistry
from src.sexpr import Keyword, SExpr, Symbol

VERBOSITY_HOOK = Keyword("verbosity")

_DEFAULTS_SET = Symbol("defaults-set")
_VERBOSITY_LEVEL = Symbol("verbosity-level")
_VERBOSITY_KEY = Keyword("verbosity-level")


def install_verbosity_hooks(registry: HookRegistry, name: Keyword = VERBOSITY_HOOK) -> None:
    """
    Hooks de quiet mode para a verbosidade do prover: ao ligar, guarda o
    `verbosity-level` atual e o zera; ao desligar, restaura o valor guardado.
    """
    saved: Dict[str, SExpr] = {}

    def on_hook(session) -> List[SExpr]:
        current = session.get_default(_VERBOSITY_KEY)
        if current.ok and isinstance(current.payload, int):
            saved["level"] = current.payload
        return [(_DEFAULTS_SET, _VERBOSITY_LEVEL, 0)]

    def off_hook(session) -> List[SExpr]:
        if "level" not in saved:
            return []
        return [(_DEFAULTS_SET, _VERBOSITY_LEVEL, saved.pop("level"))]

    registry.add_on_hook(name, on_hook)
    registry.add_off_hook(name, off_hook)
