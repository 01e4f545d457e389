# src/miniprover/embedded.py

from typing import List, Optional

from src.models.errors import ProtocolError
from src.transport.connection import Connection, OutputCallback
from src.transport.frames import Frame, Reply, decode_frame, encode_frame
from .server import MiniProver


class InProcessConnection(Connection):
    """
    Miniprover no mesmo processo, atrás da mesma interface `roundtrip`.

    Cada frame passa pelo codec nos dois sentidos, então o que chega ao backend é
    exatamente o que chegaria pelo fio. O prazo por requisição não se aplica.
    """

    def __init__(self, prover: Optional[MiniProver] = None):
        super().__init__()
        self.prover = prover or MiniProver()

    def roundtrip(self, request: Frame, on_output: Optional[OutputCallback] = None,
                  deadline: Optional[float] = None) -> Reply:
        with self._lock:
            self._ensure_alive()
            frame = decode_frame(encode_frame(request.with_id(next(self._ids))))
            produced: List[Frame] = []
            self.prover.handle(frame, lambda f: produced.append(decode_frame(encode_frame(f))))
            for item in produced:
                reply = self._interpret(item, frame.id, on_output)
                if reply is not None:
                    return reply
            self._mark_dead("backend sem frame terminal")
            raise ProtocolError(f"nenhum frame terminal para {frame.kind} #{frame.id}")
