# Arquivo: /src/config.py

import os
from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"A variável de ambiente {name} deve ser um inteiro, recebido: {raw!r}")


class Config:
    """Configuração do bridge, do miniprover e do pool, lida do ambiente (.env incluso)."""
    DEADLINE_MS = _int_env('PROVER_BRIDGE_DEADLINE_MS', 30000)
    HANDSHAKE_TIMEOUT_MS = _int_env('PROVER_BRIDGE_HANDSHAKE_MS', 10000)
    BACKEND = os.environ.get('PROVER_BRIDGE_BACKEND')
    DEFAULT_STEP_LIMIT = 100000
    LOG_LEVEL = os.environ.get('PROVER_BRIDGE_LOG_LEVEL', 'WARNING').upper()

    POOL_WORKERS = _int_env('PROVER_POOL_WORKERS', 4)
    POOL_LISTEN = os.environ.get('PROVER_POOL_LISTEN', '127.0.0.1:7070')
    POOL_MAX_WAIT_MS = _int_env('PROVER_POOL_MAX_WAIT_MS', 5000)
    POOL_MONITOR_INTERVAL_MS = _int_env('PROVER_POOL_MONITOR_INTERVAL_MS', 100)
    POOL_STATUS_PORT = _int_env('PROVER_POOL_STATUS_PORT', 0)


def current_deadline_seconds() -> float:
    """Prazo por requisição, relendo PROVER_BRIDGE_DEADLINE_MS a cada chamada."""
    return _int_env('PROVER_BRIDGE_DEADLINE_MS', Config.DEADLINE_MS) / 1000.0
