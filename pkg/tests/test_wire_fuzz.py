# tests/test_wire_fuzz.py

import pytest

from src.bridge import QueryResult, compute
from src.sexpr import QUOTE
from src.transport import decode_frame, encode_frame
from src.transport.frames import ok_frame
from tests.generators import random_sexpr


def test_codec_preserves_random_payloads(rng):
    for i in range(10_000):
        value = random_sexpr(rng)
        data = encode_frame(ok_frame(i + 1, value))
        assert data.count(b"\n") == 1
        assert decode_frame(data).payload == value


@pytest.mark.slow
def test_live_backend_echoes_random_payloads(stdio_session, rng):
    for _ in range(10_000):
        value = random_sexpr(rng)
        assert compute(stdio_session, (QUOTE, value)) == QueryResult.success(value)


def test_in_process_backend_echoes_random_payloads(session, rng):
    for _ in range(1000):
        value = random_sexpr(rng)
        assert compute(session, (QUOTE, value)) == QueryResult.success(value)
