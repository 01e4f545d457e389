# src/transport/__init__.py
from .frames import (
    EOF,
    STATUS_ERROR,
    STATUS_OK,
    ChannelDirective,
    Frame,
    MalformedFrame,
    Reply,
    decode_frame,
    encode_frame,
    get_default_request,
    get_global_request,
    ld_request,
)
from .connection import (
    Connection,
    StdioConnection,
    TcpConnection,
    connect_tcp,
    default_backend_command,
    parse_address,
    roundtrip,
    spawn_stdio_backend,
)

__all__ = [
    "EOF", "STATUS_ERROR", "STATUS_OK", "ChannelDirective", "Frame", "MalformedFrame",
    "Reply", "decode_frame", "encode_frame", "get_default_request", "get_global_request", "ld_request",
    "Connection", "StdioConnection", "TcpConnection", "connect_tcp",
    "default_backend_command", "parse_address", "roundtrip", "spawn_stdio_backend",
]
