# tests/conftest.py

import io
import random

import pytest

from src.bridge import Session
from src.transport import spawn_stdio_backend


@pytest.fixture
def passthrough():
    return io.StringIO()


@pytest.fixture
def session(passthrough):
    with Session.in_process(passthrough) as s:
        yield s


@pytest.fixture
def prover(session):
    """O MiniProver por trás da sessão em processo."""
    return session.connection.prover


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def stdio_backend():
    conn = spawn_stdio_backend(deadline=10.0, handshake_timeout=15.0)
    yield conn
    conn.close()


@pytest.fixture
def stdio_session(passthrough):
    with Session.spawn(None, passthrough) as s:
        yield s
