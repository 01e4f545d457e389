# src/bridge/__init__.py
from src.models.query_result import QueryResult
from src.output import (
    add_quiet_mode_off_hook,
    add_quiet_mode_on_hook,
    capture_output_off,
    capture_output_on,
    get_captured_output,
    quiet_mode_off,
    quiet_mode_on,
    remove_hook,
    set_quiet_mode,
)
from .options import RESERVED_OPTIONS, BridgeOptions, strip_reserved_options
from .session import RESULT_VAR, Session
from .interface import compute, event, get_prover_step_limit, query
from .verbosity import install_verbosity_hooks

__all__ = [
    "QueryResult", "BridgeOptions", "RESERVED_OPTIONS", "strip_reserved_options",
    "RESULT_VAR", "Session", "compute", "event", "get_prover_step_limit", "query",
    "install_verbosity_hooks",
    "add_quiet_mode_off_hook", "add_quiet_mode_on_hook", "capture_output_off",
    "capture_output_on", "get_captured_output", "quiet_mode_off", "quiet_mode_on",
    "remove_hook", "set_quiet_mode",
]
