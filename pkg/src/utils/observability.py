# src/utils/observability.py
import logging
import sys
import time
import functools
import threading
from typing import Callable, Any, Optional, TextIO

import structlog


class CorrelationContext:
    """Gerenciador de contexto para correlation IDs"""

    def __init__(self):
        self._storage = threading.local()

    def set_correlation_id(self, correlation_id: str):
        self._storage.correlation_id = correlation_id

    def get_correlation_id(self) -> str:
        return getattr(self._storage, 'correlation_id', 'unknown')

    def clear(self):
        self._storage.correlation_id = 'unknown'


# Instância global do gerenciador de contexto
correlation_ctx = CorrelationContext()


def _add_correlation_id(logger, method_name, event_dict):
    # Lido a cada evento: loggers de módulo são criados no import, antes de qualquer requisição.
    event_dict.setdefault("correlation_id", correlation_ctx.get_correlation_id())
    return event_dict


# Configurar structlog
structlog.configure(
    processors=[
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        _add_correlation_id,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.processors.JSONRenderer()  # Saída em JSON para fácil parsing
    ],
    context_class=dict,
    logger_factory=structlog.stdlib.LoggerFactory(),
    wrapper_class=structlog.stdlib.BoundLogger,
    cache_logger_on_first_use=True,
)

# Criar logger principal
logger = structlog.get_logger("prover_bridge")


def setup_logging(level=logging.WARNING, stream: Optional[TextIO] = None):
    """
    Configura o logging para a aplicação.

    Vai para stderr por padrão: o stdout do miniprover carrega frames do protocolo
    e o stdout da CLI carrega linhas de resultado.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.basicConfig(
        format="%(message)s",
        stream=stream or sys.stderr,
        level=level,
        force=True,
    )


def _elapsed_ms(started: float) -> float:
    return round((time.perf_counter() - started) * 1000, 2)


def track_performance(func: Callable) -> Callable:
    """Registra início, duração e falha de operações longas (spawn, subida do pool, scripts)."""
    operation = func.__qualname__

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        started = time.perf_counter()
        logger.debug("operation_started", operation=operation, kwargs_keys=sorted(kwargs))
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(
                "operation_failed",
                operation=operation,
                duration_ms=_elapsed_ms(started),
                error=str(e),
                error_type=type(e).__name__,
            )
            raise
        logger.info("operation_completed", operation=operation, duration_ms=_elapsed_ms(started))
        return result

    return wrapper


def log_with_context(**kwargs):
    """Retorna um logger com contexto fixo (ex.: component=...)."""
    return logger.bind(**kwargs)
