# src/output/__init__.py
from .control import (
    CaptureBuffer,
    HookRegistry,
    OutputControl,
    SinkPolicy,
    StreamClass,
    add_quiet_mode_off_hook,
    add_quiet_mode_on_hook,
    capture_output_off,
    capture_output_on,
    get_captured_output,
    policy_for,
    quiet_mode_off,
    quiet_mode_on,
    remove_hook,
    route_output,
    set_quiet_mode,
)

__all__ = [
    "CaptureBuffer", "HookRegistry", "OutputControl", "SinkPolicy", "StreamClass",
    "add_quiet_mode_off_hook", "add_quiet_mode_on_hook", "capture_output_off",
    "capture_output_on", "get_captured_output", "policy_for", "quiet_mode_off",
    "quiet_mode_on", "remove_hook", "route_output", "set_quiet_mode",
]
