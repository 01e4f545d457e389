# Arquivo: /src/api/pool/routes.py

from flask import Blueprint, current_app, jsonify

pool_bp = Blueprint('pool_bp', __name__)


def _pool():
    return current_app.extensions["prover_pool"]


@pool_bp.route('/health')
def health_check():
    """200 quando todos os workers estão vivos, 503 caso contrário."""
    pool = _pool()
    live = pool.live_worker_count()
    expected = pool.config.worker_count
    body = {"status": "ok" if live == expected else "degraded", "live_workers": live, "workers": expected}
    return jsonify(body), (200 if live == expected else 503)


@pool_bp.route('/status')
def status():
    pool = _pool()
    host, port = pool.address or (None, None)
    return jsonify({
        "listen": {"host": host, "port": port},
        "max_acquire_wait": pool.config.max_acquire_wait,
        "workers": pool.status(),
    })
