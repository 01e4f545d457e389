# src/bridge/interface.py

"""
As três chamadas do bridge.

- compute(form): `form` deve produzir um único valor não-stobj.
- query(form): `form` deve produzir um error triple `(mv erp val state)`.
- event(form): `form` é um evento; só importa se o ld terminou em :eof.

Cada chamada envia um único `ld` com a forma embrulhada; quando há valor a
devolver, ele é guardado num global do state e lido com `get-global`.
Falhas do prover viram `(t nil)`; falhas de transporte levantam BackendUnavailable.
"""

from typing import Callable, Union

from src.config import Config
from src.models.errors import BackendUnavailable
from src.models.query_result import QueryResult
from src.output import StreamClass, set_quiet_mode
from src.sexpr import NIL, Keyword, SExpr, Symbol, is_nil, read_sexpr
from src.transport import ChannelDirective, Reply
from src.transport.frames import directives_plist
from src.utils.observability import log_with_context
from .options import BridgeOptions
from .session import ASSIGN, LD_ERROR_ACTION_STRICT, LD_QUIET_FLAGS, Session

logger = log_with_context(component="Bridge")

WITH_PROVER_STEP_LIMIT = Symbol("with-prover-step-limit")
MV_LET = Symbol("mv-let")
LIST = Symbol("list")
ERP, VAL, STATE = Symbol("erp"), Symbol("val"), Symbol("state")
STEP_LIMIT_KEY = Keyword("step-limit")

KNOWN_EVENT_OPERATORS = frozenset({
    "defconst", "defun", "defthm", "defaults-set", "thm",
    "defmacro", "defstobj", "encapsulate", "include-book", "in-package", "table",
})

FormLike = Union[str, SExpr]
OptionsLike = Union[BridgeOptions, tuple, list, None]


def _form(form: FormLike) -> SExpr:
    return read_sexpr(form) if isinstance(form, str) else form


def _options(opts: OptionsLike) -> BridgeOptions:
    if opts is None:
        return BridgeOptions()
    if isinstance(opts, BridgeOptions):
        return opts
    return BridgeOptions.from_plist(opts)


def get_prover_step_limit(session: Session) -> int:
    """
    Lê `step-limit` da tabela de defaults do backend; sem entrada (nil), usa o padrão.

    A leitura é um `get-default`, fora do orçamento de passos: entradas 0 e 1
    voltam como estão. Uma resposta de erro ou um valor que não seja inteiro
    não negativo quebra o protocolo e levanta BackendUnavailable.
    """
    with session.lease:
        reply = session.get_default(STEP_LIMIT_KEY)
    value = reply.payload
    if reply.ok and is_nil(value):
        return Config.DEFAULT_STEP_LIMIT
    if reply.ok and isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return value
    logger.error("step_limit_entry_unreadable", status=reply.status.name, payload=str(value))
    raise BackendUnavailable(f"entrada step-limit ilegível: {value!r}")


def _step_limit(session: Session, opts: BridgeOptions) -> int:
    if opts.prover_step_limit is not None:
        return opts.prover_step_limit
    return get_prover_step_limit(session)


def _call(session: Session, wrapped: SExpr, opts: BridgeOptions,
          finish: Callable[[Reply], QueryResult]) -> QueryResult:
    with session.lease:
        turned_on = opts.quiet and not session.output.quiet
        if turned_on:
            set_quiet_mode(session, True)
        try:
            policies = session.output.begin_call(opts.capture_output or session.output.capture)
            options = directives_plist({cls: ChannelDirective.for_policy(policies[cls]) for cls in StreamClass})
            options += LD_ERROR_ACTION_STRICT
            if session.output.quiet:
                options += LD_QUIET_FLAGS
            options += tuple(opts.extra_ld_options)

            reply = session.ld([wrapped], options, on_output=session.output.route)
            if not reply.is_eof:
                logger.debug("ld_reported_failure", status=reply.status.name, payload=str(reply.payload))
            return finish(reply)
        finally:
            if turned_on:
                if session.dead:
                    session.output.quiet = False
                else:
                    set_quiet_mode(session, False)


def compute(session: Session, form: FormLike, opts: OptionsLike = None) -> QueryResult:
    form = _form(form)
    opts = _options(opts)

    def finish(reply: Reply) -> QueryResult:
        if not reply.is_eof:
            return QueryResult.failure()
        fetched = session.get_global(session.result_var)
        return QueryResult.success(fetched.payload) if fetched.ok else QueryResult.failure()

    return _call(session, (ASSIGN, session.result_var, form), opts, finish)


def query(session: Session, form: FormLike, opts: OptionsLike = None) -> QueryResult:
    form = _form(form)
    opts = _options(opts)
    head = form[0] if isinstance(form, tuple) else None
    if isinstance(head, Symbol) and head.name in KNOWN_EVENT_OPERATORS:
        # não há verificação de que o world ficou intacto; só o aviso
        logger.warning("query_with_event_operator", operator=head.name)
    limit = _step_limit(session, opts)
    wrapped = (
        WITH_PROVER_STEP_LIMIT, limit,
        (MV_LET, (ERP, VAL, STATE), form,
         (ASSIGN, session.result_var, (LIST, ERP, VAL))),
    )

    def finish(reply: Reply) -> QueryResult:
        if not reply.is_eof:
            return QueryResult.failure()
        fetched = session.get_global(session.result_var)
        stashed = fetched.payload
        if not fetched.ok or not isinstance(stashed, tuple) or len(stashed) != 2:
            return QueryResult.failure()
        erp, val = stashed
        return QueryResult.success(val) if is_nil(erp) else QueryResult.failure()

    return _call(session, wrapped, opts, finish)


def event(session: Session, form: FormLike, opts: OptionsLike = None) -> QueryResult:
    form = _form(form)
    opts = _options(opts)
    limit = _step_limit(session, opts)

    def finish(reply: Reply) -> QueryResult:
        return QueryResult.success(NIL) if reply.is_eof else QueryResult.failure()

    return _call(session, (WITH_PROVER_STEP_LIMIT, limit, form), opts, finish)


MODES = {
    "compute": compute,
    "query": query,
    "event": event,
}
