# src/miniprover/__init__.py
from .values import (
    STATE,
    EvalOutcome,
    HardError,
    MultipleValues,
    SoftError,
    StepLimitExceeded,
    Stobj,
    Values,
    is_error_triple,
    realized_signature,
)
from .world import Event, FunctionDef, GlobalsTable, World, canonical
from .evaluator import EVENT_OPERATORS, Evaluator, apply_event, eval_form
from .ld import run_ld
from .server import MiniProver, serve_stdio
from .embedded import InProcessConnection

__all__ = [
    "STATE", "EvalOutcome", "HardError", "MultipleValues", "SoftError", "StepLimitExceeded",
    "Stobj", "Values", "is_error_triple", "realized_signature",
    "Event", "FunctionDef", "GlobalsTable", "World", "canonical",
    "EVENT_OPERATORS", "Evaluator", "apply_event", "eval_form",
    "run_ld", "MiniProver", "serve_stdio", "InProcessConnection",
]
