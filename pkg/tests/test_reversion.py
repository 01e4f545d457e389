# tests/test_reversion.py

"""Uma chamada que falha deixa o world exatamente como estava; os globais não voltam atrás."""

from src.bridge import QueryResult, compute, event, query
from src.miniprover import GlobalsTable, World, run_ld
from src.sexpr import read_sexpr


def failing_event(rng, defined):
    choices = [
        "(defconst *ruim* (mv 1 2))",
        "(defconst sem-asteriscos 1)",
        "(thm (< 3 2))",
        "(defthm falso (equal 1 2))",
        "(defaults-set step-limit -5)",
        "(er hard 'evento \"quebrou\")",
        "(defun car (x) x)",
    ]
    if defined:
        choices.append(f"(defconst {rng.choice(defined)} 0)")
    return rng.choice(choices)


def test_failed_events_restore_the_world(session, prover, rng):
    for sequence in range(200):
        defined = []
        for step in range(rng.randint(1, 6)):
            if rng.random() < 0.5:
                name = f"*c-{sequence}-{step}*"
                before = prover.world.fingerprint()
                assert event(session, f"(defconst {name} {step})") == QueryResult.success()
                assert prover.world.fingerprint() != before
                defined.append(name)
            else:
                before = prover.world.fingerprint()
                assert event(session, failing_event(rng, defined)).erp
                assert prover.world.fingerprint() == before


def test_multi_form_ld_failure_reverts_earlier_forms(prover):
    before = prover.world.fingerprint()
    forms = [read_sexpr(t) for t in ("(defconst *um* 1)", "(defun f (x) x)", "(er hard 'x \"no meio\")")]
    _, _, world = run_ld(forms, (), prover.world, prover.globals, lambda c, t: None)
    assert world.fingerprint() == before
    assert not world.is_defined(read_sexpr("*um*"))


def test_globals_assigned_before_failure_persist(session, rng):
    for i in range(50):
        value = rng.randint(0, 1000)
        failing = f"(mv-let (e v state) (assign g{i} {value}) (er soft 'teste \"falha depois do assign\"))"
        assert query(session, failing).erp
        assert compute(session, f"(@ g{i})") == QueryResult.success(value)


def test_globals_table_survives_failed_ld():
    globals_ = GlobalsTable()
    world = World()
    run_ld([read_sexpr("(assign a 1)"), read_sexpr("(car 1)")], (), world, globals_, lambda c, t: None)
    assert globals_.snapshot() == {read_sexpr("a"): 1}
