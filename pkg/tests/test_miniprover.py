# tests/test_miniprover.py

import io

import pytest

from src.miniprover import (
    STATE,
    GlobalsTable,
    HardError,
    MiniProver,
    SoftError,
    StepLimitExceeded,
    Values,
    World,
    apply_event,
    eval_form,
    run_ld,
    serve_stdio,
)
from src.miniprover.evaluator import format_message
from src.output import StreamClass
from src.sexpr import NIL, T, Keyword, Symbol, read_sexpr
from src.transport.frames import EOF, STATUS_ERROR, STATUS_OK

COUNT_DOWN = "(defun count-down (n) (if (zp n) t (count-down (- n 1))))"


def run(text, world=None, globals_=None, budget=10_000, emit=None):
    return eval_form(read_sexpr(text), {}, world or World(), globals_ or GlobalsTable(), budget, emit)


def collecting():
    out = []
    return out, lambda cls, text: out.append((cls, text))


@pytest.mark.parametrize("text, expected", [
    ("(+ 1 2)", Values((3,))),
    ("(mv 1 2)", Values((1, 2))),
    ("(mv nil 7 state)", Values((NIL, 7, STATE))),
    ("(list 1 'a \"s\")", Values(((1, Symbol("a"), "s"),))),
    ("(if (< 1 2) :sim :nao)", Values((Keyword("sim"),))),
    ("(car (cdr '(1 2 3)))", Values((2,))),
    ("(cons 0 '(1))", Values(((0, 1),))),
    ("(equal '(a) (list 'a))", Values((T,))),
    ("state", Values((STATE,))),
    ("acl2::state", Values((STATE,))),
])
def test_eval_form_values(text, expected):
    assert run(text) == expected


@pytest.mark.parametrize("text", [
    "(er hard 'top \"quebrou\")",
    "livre",
    "(car 5)",
    "(nao-existe 1)",
    "(mv-let (a b) (mv 1 2 3) a)",
    "(+ (mv 1 2) 3)",
    "(list state)",
    "(mv-let (a s) (mv 1 state) a)",
])
def test_eval_form_hard_errors(text):
    assert isinstance(run(text), HardError)


def test_signature_marks_stobj_positions():
    outcome = run("(mv nil 7 state)")
    assert outcome.signature == (NIL, NIL, Symbol("state"))


def test_soft_error_is_an_error_triple_at_term_level():
    out, emit = collecting()
    outcome = run("(er soft 'top \"falhou ~x0\" 42)", emit=emit)
    assert outcome == Values((T, NIL, STATE))
    assert out == [(StreamClass.STANDARD_CO, "Error in top: falhou 42\n")]


def test_mv_let_and_assign_updates_globals():
    globals_ = GlobalsTable()
    outcome = run("(mv-let (erp val state) (assign r 5) (assign out (list erp val)))", globals_=globals_)
    assert outcome == Values((NIL, (NIL, 5), STATE))
    assert globals_.get(Symbol("out")) == (NIL, 5)
    assert globals_.get(Symbol("r", "acl2")) == 5


def test_boundp_global_and_at():
    globals_ = GlobalsTable()
    assert run("(boundp-global g state)", globals_=globals_) == Values((NIL,))
    run("(assign g 9)", globals_=globals_)
    assert run("(boundp-global g state)", globals_=globals_) == Values((T,))
    assert run("(@ g)", globals_=globals_) == Values((9,))


def test_step_budget_is_enforced():
    outcome, world = apply_event(read_sexpr(COUNT_DOWN), World())
    assert isinstance(outcome, Values)
    assert isinstance(run("(count-down 100)", world=world, budget=10), StepLimitExceeded)
    assert run("(count-down 30)", world=world) == Values((T,))


@pytest.mark.parametrize("depth", [1000, 5000])
def test_deep_recursion_is_bounded_only_by_steps(depth):
    _, world = apply_event(read_sexpr(COUNT_DOWN), World())
    assert run(f"(count-down {depth})", world=world, budget=100_000) == Values((T,))


def test_recursion_past_the_budget_is_a_step_limit_not_a_hard_error():
    _, world = apply_event(read_sexpr(COUNT_DOWN), World())
    assert run("(count-down 20000)", world=world, budget=100_000) == StepLimitExceeded()


def test_with_prover_step_limit_nests_inside_outer_budget():
    _, world = apply_event(read_sexpr(COUNT_DOWN), World())
    limited = "(with-prover-step-limit 5 (mv nil (count-down 50) state))"
    assert isinstance(run(limited, world=world), StepLimitExceeded)
    assert run("(with-prover-step-limit 100000 (mv nil (count-down 50) state))", world=world, budget=20) \
        == StepLimitExceeded()
    assert run("(with-prover-step-limit nil (mv nil 1 state))") == Values((NIL, 1, STATE))


def test_with_prover_step_limit_requires_error_triple_body():
    assert isinstance(run("(with-prover-step-limit 10 (+ 1 2))"), HardError)


def test_eval_form_never_changes_the_world():
    world = World()
    before = world.fingerprint()
    assert isinstance(run("(defconst *k* 5)", world=world), Values)
    assert world.fingerprint() == before


def test_apply_event_extends_world():
    outcome, world = apply_event(read_sexpr("(defconst *k* 5)"), World())
    assert outcome == Values((NIL, Symbol("*k*"), STATE))
    assert [str(e) for e in world.events] == ["defconst *k*"]
    assert run("(+ *k* 1)", world=world) == Values((6,))


def test_apply_event_failure_returns_original_world():
    _, world = apply_event(read_sexpr("(defconst *k* 5)"), World())
    outcome, after = apply_event(read_sexpr("(defconst *k* 6)"), world)
    assert isinstance(outcome, SoftError)
    assert after is world
    assert run("*k*", world=after) == Values((5,))


def test_apply_event_rejects_non_events():
    outcome, world = apply_event(read_sexpr("(+ 1 2)"), World())
    assert isinstance(outcome, HardError)


def test_thm_reports_proof_on_proofs_channel():
    out, emit = collecting()
    outcome, world = apply_event(read_sexpr("(thm (< 1 2))"), World(), emit=emit)
    assert isinstance(outcome, Values)
    assert world.events == []
    assert out == [
        (StreamClass.PROOFS_CO, "Proof attempt for (< 1 2)\n"),
        (StreamClass.PROOFS_CO, "Q.E.D.\n"),
    ]


def test_false_thm_is_soft_error():
    out, emit = collecting()
    outcome, _ = apply_event(read_sexpr("(thm (< 2 1))"), World(), emit=emit)
    assert isinstance(outcome, SoftError)
    assert (StreamClass.PROOFS_CO, "Proof failed.\n") in out


def test_verbosity_zero_silences_proofs():
    _, world = apply_event(read_sexpr("(defaults-set verbosity-level 0)"), World())
    out, emit = collecting()
    outcome, world = apply_event(read_sexpr("(defthm um-menor-que-dois (< 1 2))"), world, emit=emit)
    assert isinstance(outcome, Values)
    assert out == []
    assert Symbol("um-menor-que-dois") in world.theorems


def test_defaults_set_validates_step_limit():
    outcome, world = apply_event(read_sexpr("(defaults-set step-limit -1)"), World())
    assert isinstance(outcome, SoftError)
    assert world.step_limit == 100000


def test_defun_cannot_shadow_builtin():
    outcome, _ = apply_event(read_sexpr("(defun car (x) x)"), World())
    assert isinstance(outcome, SoftError)


@pytest.mark.parametrize("fmt, args, expected", [
    ("valor ~x0 e ~x1", [1, Symbol("a")], "valor 1 e a"),
    ("linha~%", [], "linha\n"),
    ("til ~~", [], "til ~"),
])
def test_format_message(fmt, args, expected):
    assert format_message(fmt, args) == expected


# --- ld ---

def forms(*texts):
    return [read_sexpr(t) for t in texts]


def test_run_ld_success_keeps_events():
    status, payload, world = run_ld(forms("(defconst *a* 1)", "(defconst *b* 2)"), (), World(), GlobalsTable(),
                                    lambda c, t: None)
    assert (status, payload) == (STATUS_OK, EOF)
    assert len(world.events) == 2


def test_run_ld_failure_reverts_world_but_not_globals():
    world = World()
    globals_ = GlobalsTable()
    status, payload, after = run_ld(
        forms("(defconst *a* 1)", "(assign g 3)", "(defconst *a* 2)"), (), world, globals_, lambda c, t: None)
    assert (status, payload) == (STATUS_ERROR, Keyword("soft-error"))
    assert after is world
    assert after.events == []
    assert globals_.get(Symbol("g")) == 3


@pytest.mark.parametrize("text, code", [
    ("(er hard 'x \"y\")", "hard-error"),
    ("(mv 1 2)", None),
    ("livre", "hard-error"),
])
def test_run_ld_failure_codes(text, code):
    status, payload, _ = run_ld(forms(text), (), World(), GlobalsTable(), lambda c, t: None)
    if code is None:
        assert status == STATUS_OK
    else:
        assert (status, payload) == (STATUS_ERROR, Keyword(code))


def test_run_ld_step_limit_from_world_defaults():
    world = World()
    _, _, world = run_ld(forms(COUNT_DOWN, "(defaults-set step-limit 20)"), (), world, GlobalsTable(),
                         lambda c, t: None)
    out, emit = collecting()
    status, payload, _ = run_ld(forms("(count-down 100)"), (), world, GlobalsTable(), emit)
    assert (status, payload) == (STATUS_ERROR, Keyword("step-limit"))
    assert out == [(StreamClass.STANDARD_CO, "Step limit exceeded.\n")]


def test_run_ld_suppression_happens_at_the_source():
    options = (Keyword("comment-window"), Keyword("suppress"), Keyword("standard-co"), Keyword("emit"))
    out, emit = collecting()
    run_ld(forms("(cw \"a~%\")", "(er soft 'c \"b\")"), options, World(), GlobalsTable(), emit)
    assert out == [(StreamClass.STANDARD_CO, "Error in c: b\n")]


def test_run_ld_pre_eval_print():
    out, emit = collecting()
    run_ld(forms("(+ 1 2)"), (Keyword("ld-pre-eval-print"), T), World(), GlobalsTable(), emit)
    assert out == [(StreamClass.STANDARD_CO, "(+ 1 2)\n")]


@pytest.mark.parametrize("options", [
    (Keyword("standard-co"),),
    (Keyword("standard-co"), Keyword("loud")),
    (Keyword("ld-error-action"), Keyword("continue")),
    (Keyword("what"), T),
])
def test_run_ld_bad_options(options):
    status, payload, _ = run_ld(forms("1"), options, World(), GlobalsTable(), lambda c, t: None)
    assert (status, payload) == (STATUS_ERROR, Keyword("bad-ld-option"))


# --- servidor ---

def serve(text: str) -> str:
    stdout = io.BytesIO()
    assert serve_stdio(io.BytesIO(text.encode("utf-8")), stdout) == 0
    return stdout.getvalue().decode("utf-8")


def test_serve_stdio_ping_and_get_global():
    assert serve("(ping 1)\n(ld 2 ((assign r 5)) nil)\n(get-global 3 r)\n(get-global 4 nada)\n") == (
        "(pong 1)\n(ret 2 :ok :eof)\n(ret 3 :ok 5)\n(ret 4 :error :unbound-global)\n"
    )


def test_serve_stdio_get_default_reads_table_without_steps():
    assert serve(
        "(ld 1 ((defaults-set step-limit 0)) nil)\n"
        "(get-default 2 :step-limit)\n(get-default 3 :nada)\n(get-default 4 step-limit)\n"
    ) == "(ret 1 :ok :eof)\n(ret 2 :ok 0)\n(ret 3 :ok nil)\n(ret 4 :error :protocol)\n"


def test_serve_stdio_streams_output_before_ret():
    assert serve('(ld 1 ((cw "oi~%")) nil)\n') == '(out 1 :comment-window "oi\\n")\n(ret 1 :ok :eof)\n'


def test_serve_stdio_malformed_frames():
    assert serve("(ld 7 oops)\n(((\n\n(ret 8 :ok nil)\n") == "(ret 7 :error :protocol)\n(ret 8 :error :protocol)\n"


def test_miniprover_rejects_session_ids():
    assert serve('(ld 1 "s-1" (1) nil)\n') == "(ret 1 :error :protocol)\n"


def test_miniprover_keeps_world_between_requests():
    prover = MiniProver()
    sent = []
    prover.handle_line(b"(ld 1 ((defconst *k* 3)) nil)\n", sent.append)
    prover.handle_line(b"(ld 2 ((assign r *k*)) nil)\n", sent.append)
    prover.handle_line(b"(get-global 3 r)\n", sent.append)
    assert [f.args for f in sent] == [(STATUS_OK, EOF), (STATUS_OK, EOF), (STATUS_OK, 3)]
