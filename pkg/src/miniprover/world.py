# src/miniprover/world.py

"""
World (eventos revertíveis + tabela de defaults) e a tabela de globais do state.

O world só cresce entre snapshots; reverter é devolver o snapshot. A tabela de
globais nunca é revertida.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from src.sexpr import Keyword, SExpr, Symbol, print_sexpr
from .values import Value, is_ordinary

STEP_LIMIT = Keyword("step-limit")
VERBOSITY_LEVEL = Keyword("verbosity-level")

FRESH_DEFAULTS: Dict[Keyword, SExpr] = {
    STEP_LIMIT: 100000,
    VERBOSITY_LEVEL: 1,
}

HOME_PACKAGES = (None, "acl2")


def canonical(symbol: Symbol) -> Symbol:
    """`acl2::x` e `x` são o mesmo símbolo; outros pacotes ficam distintos."""
    if symbol.package in HOME_PACKAGES:
        return Symbol(symbol.name) if symbol.package is not None else symbol
    return symbol


@dataclass(frozen=True)
class Event:
    name: SExpr
    kind: str
    definition: SExpr

    def __str__(self) -> str:
        return f"{self.kind} {print_sexpr(self.name)}"


@dataclass(frozen=True)
class FunctionDef:
    name: Symbol
    params: Tuple[Symbol, ...]
    body: SExpr


@dataclass
class World:
    events: List[Event] = field(default_factory=list)
    defaults: Dict[Keyword, SExpr] = field(default_factory=lambda: dict(FRESH_DEFAULTS))
    constants: Dict[Symbol, SExpr] = field(default_factory=dict)
    functions: Dict[Symbol, FunctionDef] = field(default_factory=dict)
    theorems: Dict[Symbol, SExpr] = field(default_factory=dict)

    def copy(self) -> "World":
        return World(
            events=list(self.events),
            defaults=dict(self.defaults),
            constants=dict(self.constants),
            functions=dict(self.functions),
            theorems=dict(self.theorems),
        )

    def fingerprint(self) -> Tuple:
        defaults = tuple(sorted((k.name, print_sexpr(v)) for k, v in self.defaults.items()))
        return tuple(self.events), defaults

    def is_defined(self, name: Symbol) -> bool:
        return name in self.constants or name in self.functions or name in self.theorems

    @property
    def step_limit(self) -> int:
        value = self.defaults.get(STEP_LIMIT)
        return value if isinstance(value, int) else FRESH_DEFAULTS[STEP_LIMIT]

    @property
    def verbosity(self) -> int:
        value = self.defaults.get(VERBOSITY_LEVEL)
        return value if isinstance(value, int) else FRESH_DEFAULTS[VERBOSITY_LEVEL]


class GlobalsTable:
    def __init__(self):
        self._values: Dict[Symbol, SExpr] = {}

    def get(self, name: Symbol) -> Optional[SExpr]:
        return self._values.get(canonical(name))

    def set(self, name: Symbol, value: Value) -> None:
        if not is_ordinary(value):
            raise TypeError(f"stobj não pode ser guardado em global: {name.name}")
        self._values[canonical(name)] = value

    def __contains__(self, name: Symbol) -> bool:
        return canonical(name) in self._values

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def snapshot(self) -> Dict[Symbol, SExpr]:
        return dict(self._values)
