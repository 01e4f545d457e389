# src/pool/__init__.py
from .config import PoolConfig
from .server import LeaseState, PoolServer, Worker, serve
from .client import PoolClient, PoolSessionConnection

__all__ = ["PoolConfig", "LeaseState", "PoolServer", "Worker", "serve", "PoolClient", "PoolSessionConnection"]
