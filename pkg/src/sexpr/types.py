# src/sexpr/types.py

"""
Representação das S-expressions que atravessam todas as fronteiras do sistema.

- Inteiros são `int` do Python (precisão arbitrária), textos são `str`.
- Listas são `tuple` não vazias; a lista vazia é o símbolo `nil`.
- `Symbol` e `Keyword` são valores imutáveis e comparados estruturalmente.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str
    package: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.name, str):
            raise TypeError(f"nome de símbolo deve ser str: {self.name!r}")
        if self.package is not None and (not isinstance(self.package, str) or not self.package):
            raise ValueError(f"pacote de símbolo deve ser uma str não vazia: {self.package!r}")

    def __repr__(self) -> str:
        if self.package is None:
            return f"Symbol({self.name!r})"
        return f"Symbol({self.name!r}, package={self.package!r})"


@dataclass(frozen=True, slots=True)
class Keyword:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str):
            raise TypeError(f"nome de keyword deve ser str: {self.name!r}")

    def __repr__(self) -> str:
        return f"Keyword({self.name!r})"


SExpr = Union[Symbol, Keyword, int, str, Tuple["SExpr", ...]]

NIL = Symbol("nil")
T = Symbol("t")
QUOTE = Symbol("quote")


def make_list(items: Iterable[SExpr]) -> SExpr:
    """Monta uma lista; sem itens o resultado é `nil`."""
    items = tuple(items)
    return items if items else NIL


def is_nil(value: object) -> bool:
    return value == NIL


def list_items(value: SExpr) -> Tuple[SExpr, ...]:
    """Itens de uma lista (`nil` -> vazio). Átomos levantam TypeError."""
    if isinstance(value, tuple):
        return value
    if value == NIL:
        return ()
    raise TypeError(f"não é uma lista: {value!r}")


def truthy(value: object) -> bool:
    return value != NIL


def from_bool(flag: bool) -> Symbol:
    return T if flag else NIL
