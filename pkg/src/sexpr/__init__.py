# src/sexpr/__init__.py
from .types import (
    NIL,
    QUOTE,
    T,
    Keyword,
    SExpr,
    Symbol,
    from_bool,
    is_nil,
    list_items,
    make_list,
    truthy,
)
from .reader import SexprReader, read_all, read_sexpr
from .printer import print_sexpr

__all__ = [
    "NIL", "QUOTE", "T", "Keyword", "SExpr", "Symbol", "from_bool",
    "is_nil", "list_items", "make_list", "truthy",
    "SexprReader", "read_all", "read_sexpr", "print_sexpr",
]
