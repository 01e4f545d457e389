# src/api/__init__.py

"""
Fábrica da aplicação Flask que expõe o estado do pool por HTTP.

Só é criada quando o pool sobe com `--status-port`; o resto do projeto não
depende do Flask.
"""

from flask import Flask

from src.config import Config
from src.utils.observability import log_with_context

logger = log_with_context(component="StatusApi")


def create_app(pool):
    """Cria a aplicação Flask ligada a uma instância de PoolServer."""

    app = Flask(__name__)
    app.config.from_object(Config)
    app.extensions["prover_pool"] = pool

    from src.api.pool.routes import pool_bp
    app.register_blueprint(pool_bp)

    logger.info("status_app_created")
    return app
