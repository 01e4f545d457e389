# src/sexpr/printer.py

from .reader import DELIMITERS, INTEGER_RE, READER_MACRO_CHARS
from .types import Keyword, SExpr, Symbol

_STRING_ESCAPES = str.maketrans({
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
})

_BAR_ESCAPES = str.maketrans({
    "\\": "\\\\",
    "|": "\\|",
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
})

_UNSAFE_IN_NAME = DELIMITERS | frozenset(READER_MACRO_CHARS + "|\\")


def _needs_bars(name: str) -> bool:
    return (
        not name
        or name == "."
        or name.startswith(":")
        or "::" in name
        or INTEGER_RE.match(name) is not None
        or any(c in _UNSAFE_IN_NAME for c in name)
    )


def _name(name: str, is_package: bool = False) -> str:
    # um pacote terminado em ':' se confundiria com o separador '::'
    if _needs_bars(name) or (is_package and ":" in name):
        return "|" + name.translate(_BAR_ESCAPES) + "|"
    return name


def print_sexpr(e: SExpr) -> str:
    """Forma canônica: um espaço entre itens, strings re-escapadas, nunca uma quebra de linha crua."""
    if isinstance(e, Symbol):
        if e.package is None:
            return _name(e.name)
        return f"{_name(e.package, is_package=True)}::{_name(e.name)}"
    if isinstance(e, Keyword):
        return f":{_name(e.name)}"
    if isinstance(e, bool):
        raise TypeError("bool não é uma S-expression; use T/NIL")
    if isinstance(e, int):
        return str(e)
    if isinstance(e, str):
        return '"' + e.translate(_STRING_ESCAPES) + '"'
    if isinstance(e, tuple):
        if not e:
            return "nil"
        return "(" + " ".join(print_sexpr(item) for item in e) + ")"
    raise TypeError(f"valor não representável como S-expression: {e!r}")
