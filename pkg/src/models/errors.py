# src/models/errors.py

"""
Hierarquia de exceções e códigos de erro do protocolo.

Falhas do prover (erro soft, erro hard, limite de passos) NÃO são exceções:
viram resultados `(t nil)`. Exceções ficam para o que o chamador precisa
distinguir de "o prover disse não": processo morto, protocolo quebrado, uso errado.
"""


class ProverBridgeError(Exception):
    """Raiz de todas as exceções do projeto."""


# --- sexpr ---

class ParseError(ProverBridgeError):
    pass


class ReaderMacroRejected(ParseError):
    """O leitor recusa qualquer reader macro (`#`, backquote, vírgula)."""


# --- transport ---

class TransportError(ProverBridgeError):
    pass


class SpawnError(TransportError):
    pass


class ConnectError(TransportError):
    pass


class HandshakeTimeout(TransportError):
    pass


class Timeout(TransportError):
    pass


class ProtocolError(TransportError):
    pass


class BackendDied(TransportError):
    pass


class WorkerDied(BackendDied):
    """O worker do pool morreu com a sessão alugada."""


class UnknownSession(TransportError):
    pass


class PoolExhausted(TransportError):
    pass


# --- bridge ---

class BridgeError(ProverBridgeError):
    pass


class BackendUnavailable(BridgeError):
    """Falha de transporte durante uma chamada do bridge; a sessão fica morta."""


class BridgeUsageError(BridgeError):
    pass


# Códigos de erro padronizados (keywords do protocolo)
class ErrorCodes:
    PROTOCOL = "protocol"
    UNBOUND_GLOBAL = "unbound-global"
    HARD_ERROR = "hard-error"
    SOFT_ERROR = "soft-error"
    STEP_LIMIT = "step-limit"
    BAD_LD_OPTION = "bad-ld-option"
    POOL_EXHAUSTED = "pool-exhausted"
    WORKER_DIED = "worker-died"
    UNKNOWN_SESSION = "unknown-session"
