# tests/test_status_api.py

import pytest

from src.api import create_app
from src.miniprover import InProcessConnection
from src.pool import PoolConfig, PoolServer


@pytest.fixture
def pool():
    config = PoolConfig(worker_count=2, listen_address="127.0.0.1:0", monitor_interval=60.0)
    with PoolServer(config, connection_factory=InProcessConnection) as server:
        yield server


@pytest.fixture
def client(pool):
    return create_app(pool).test_client()


def test_health_ok(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.get_json() == {"status": "ok", "live_workers": 2, "workers": 2}


def test_health_degraded_when_a_worker_is_dead(client, pool):
    pool.workers[0].connection.close()
    response = client.get("/health")
    assert response.status_code == 503
    assert response.get_json()["status"] == "degraded"


def test_status_lists_workers(client, pool):
    body = client.get("/status").get_json()
    assert body["listen"]["port"] == pool.address[1]
    assert [w["state"] for w in body["workers"]] == ["free", "free"]
    assert all(w["alive"] for w in body["workers"])


def test_status_shows_leases(client, pool):
    pool.acquire()
    states = sorted(w["state"] for w in client.get("/status").get_json()["workers"])
    assert states == ["free", "leased"]
