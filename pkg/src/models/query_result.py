# src/models/query_result.py
from typing import Any

from pydantic import BaseModel, ConfigDict, model_validator

from src.sexpr import NIL, SExpr, from_bool, is_nil, print_sexpr


class QueryResult(BaseModel):
    """
    Resultado das chamadas do bridge: a lista `(erp val)`.
    Sempre que `erp` é verdadeiro, `val` é `nil`.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    erp: bool
    val: Any = NIL

    @model_validator(mode="after")
    def _val_is_nil_on_error(self) -> "QueryResult":
        if self.erp and not is_nil(self.val):
            raise ValueError("um resultado com erp verdadeiro deve ter val nil")
        return self

    @property
    def ok(self) -> bool:
        return not self.erp

    def to_sexpr(self) -> SExpr:
        return (from_bool(self.erp), self.val)

    def __str__(self) -> str:
        return print_sexpr(self.to_sexpr())

    @classmethod
    def success(cls, val: SExpr = NIL) -> "QueryResult":
        return cls(erp=False, val=val)

    @classmethod
    def failure(cls) -> "QueryResult":
        return cls(erp=True, val=NIL)
