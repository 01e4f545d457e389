# src/pool/config.py

import shlex
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.config import Config
from src.transport.connection import default_backend_command


class PoolConfig(BaseModel):
    """Configuração do servidor de pool. Tempos em segundos."""
    model_config = ConfigDict(frozen=True)

    worker_count: int = Field(default=Config.POOL_WORKERS, ge=1)
    backend_command: List[str] = Field(default_factory=default_backend_command, min_length=1)
    listen_address: str = Config.POOL_LISTEN
    max_acquire_wait: float = Field(default=Config.POOL_MAX_WAIT_MS / 1000.0, ge=0)
    restart_policy: Literal["always"] = "always"
    monitor_interval: float = Field(default=Config.POOL_MONITOR_INTERVAL_MS / 1000.0, gt=0)
    status_port: Optional[int] = Field(default=Config.POOL_STATUS_PORT or None, ge=0, le=65535)

    @field_validator("backend_command", mode="before")
    @classmethod
    def _split_command(cls, value):
        if isinstance(value, str):
            return shlex.split(value)
        return value

    @classmethod
    def from_cli(cls, workers: Optional[int] = None, listen: Optional[str] = None,
                 backend: Optional[str] = None, max_wait_ms: Optional[int] = None,
                 status_port: Optional[int] = None) -> "PoolConfig":
        fields = {}
        if workers is not None:
            fields["worker_count"] = workers
        if listen:
            fields["listen_address"] = listen
        if backend:
            fields["backend_command"] = backend
        if max_wait_ms is not None:
            fields["max_acquire_wait"] = max_wait_ms / 1000.0
        if status_port:
            fields["status_port"] = status_port
        return cls(**fields)
