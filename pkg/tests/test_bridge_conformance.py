# tests/test_bridge_conformance.py

import pytest

from src.bridge import BridgeOptions, QueryResult, compute, event, query
from src.bridge.interface import MODES
from src.models.errors import BackendUnavailable, BridgeUsageError
from src.sexpr import NIL, T, Keyword, Symbol

OK = QueryResult.success
FAIL = QueryResult.failure()

# (modo, forma, resultado esperado) numa sessão nova
CASES = [
    ("compute", "(+ 1 2)", OK(3)),
    ("compute", "'(a b)", OK((Symbol("a"), Symbol("b")))),
    ("compute", '"texto"', OK("texto")),
    ("compute", ":kw", OK(Keyword("kw"))),
    ("compute", "nil", OK(NIL)),
    ("compute", "t", OK(T)),
    ("compute", "(list 1 (+ 1 1))", OK((1, 2))),
    ("compute", "(if (< 2 1) 'sim 'nao)", OK(Symbol("nao"))),
    ("compute", "(mv 1 2)", FAIL),
    ("compute", "(mv nil 3 state)", FAIL),
    ("compute", "state", FAIL),
    ("compute", "variavel-livre", FAIL),
    ("compute", "(er hard 'top \"x\")", FAIL),
    ("compute", "(er soft 'top \"x\")", FAIL),
    ("compute", "(car 1)", FAIL),
    ("compute", "(defaults-get step-limit)", OK(100000)),
    ("query", "(mv nil 42 state)", OK(42)),
    ("query", "(mv nil '(1 2) state)", OK((1, 2))),
    ("query", "(mv t 42 state)", FAIL),
    ("query", "(mv 7 nil state)", FAIL),
    ("query", "(er soft 'top \"boom\")", FAIL),
    ("query", "(er hard 'top \"boom\")", FAIL),
    ("query", "(+ 1 2)", FAIL),
    ("query", "(mv 1 2)", FAIL),
    ("query", "(mv nil 1 2)", FAIL),
    ("query", "(mv nil state state)", FAIL),
    ("query", "(assign x 5)", OK(5)),
    ("query", "(mv-let (e v state) (mv nil 2 state) (mv e (+ v 1) state))", OK(3)),
    ("event", "(defconst *k* 5)", OK(NIL)),
    ("event", "(defun dobro (x) (* 2 x))", OK(NIL)),
    ("event", "(defthm trivial (< 1 2))", OK(NIL)),
    ("event", "(thm (< 1 2))", OK(NIL)),
    ("event", "(thm (< 2 1))", FAIL),
    ("event", "(defconst k 5)", FAIL),
    ("event", "(defconst *k* (mv 1 2))", FAIL),
    ("event", "(defaults-set verbosity-level 3)", OK(NIL)),
    ("event", "(mv nil nil state)", OK(NIL)),
    ("event", "(+ 1 2)", FAIL),
    ("event", "(er hard 'top \"x\")", FAIL),
]


@pytest.mark.parametrize("mode, form, expected", CASES)
def test_case_table(session, mode, form, expected):
    assert MODES[mode](session, form) == expected


def test_results_print_canonically(session):
    assert str(compute(session, "(+ 1 2)")) == "(nil 3)"
    assert str(compute(session, "(mv 1 2)")) == "(t nil)"
    assert str(query(session, "(mv nil \"a\" state)")) == '(nil "a")'


def test_failure_always_has_nil_value(session):
    result = query(session, "(mv t 99 state)")
    assert result.erp is True
    assert result.val == NIL


def test_events_persist_across_calls(session):
    assert event(session, "(defconst *base* 10)").ok
    assert event(session, "(defun soma-base (x) (+ x *base*))").ok
    assert compute(session, "(soma-base 5)") == OK(15)
    assert query(session, "(mv nil (soma-base 1) state)") == OK(11)


def test_failed_event_leaves_world_intact(session, prover):
    event(session, "(defconst *k* 1)")
    before = prover.world.fingerprint()
    assert not event(session, "(defconst *k* 2)").ok
    assert prover.world.fingerprint() == before
    assert compute(session, "*k*") == OK(1)


def test_globals_survive_query_and_compute(session):
    assert query(session, "(assign contador 1)") == OK(1)
    assert compute(session, "(@ contador)") == OK(1)
    assert query(session, "(mv-let (e v state) (assign contador 2) (mv nil (@ contador) state))") == OK(2)


def test_query_with_event_operator_still_runs(session):
    assert query(session, "(defconst *q* 1)") == OK(Symbol("*q*"))


def test_forms_may_be_given_as_sexprs(session):
    assert compute(session, (Symbol("+"), 2, 2)) == OK(4)


@pytest.mark.parametrize("plist", [
    (Keyword("quiet"),),
    (1, 2),
    (Keyword("prover-step-limit"), -3),
    (Keyword("prover-step-limit"), "muitos"),
])
def test_bad_option_plists_are_usage_errors(session, plist):
    with pytest.raises(BridgeUsageError):
        compute(session, "1", plist)


def test_plist_options_are_accepted(session):
    plist = (Keyword("quiet"), T, Keyword("capture-output"), T, Keyword("standard-co"), Keyword("suppress"))
    opts = BridgeOptions.from_plist(plist)
    assert opts.quiet and opts.capture_output
    assert opts.extra_ld_options == ()
    assert compute(session, "(+ 1 1)", plist) == OK(2)


def test_extra_ld_options_are_forwarded(session, passthrough):
    opts = BridgeOptions(extra_ld_options=(Keyword("ld-pre-eval-print"), T))
    assert compute(session, "5", opts) == OK(5)
    assert "(assign prover-bridge::command-result 5)" in passthrough.getvalue()


def test_unknown_ld_option_fails_the_call(session):
    assert compute(session, "5", BridgeOptions(extra_ld_options=(Keyword("nao-existe"), T))) == FAIL


def test_dead_backend_raises_backend_unavailable(session):
    session.connection.close()
    with pytest.raises(BackendUnavailable):
        compute(session, "1")
    assert session.dead
    with pytest.raises(BackendUnavailable):
        query(session, "(mv nil 1 state)")
