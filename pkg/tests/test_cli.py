# tests/test_cli.py

import io
import logging

import pytest

from src.cli import main


@pytest.fixture(autouse=True)
def restore_logging():
    # main() reconfigura o logging raiz apontando para o stderr capturado
    handlers, level = list(logging.root.handlers), logging.root.level
    yield
    logging.root.handlers[:] = handlers
    logging.root.setLevel(level)


def run(*argv, stdin=""):
    out = io.StringIO()
    code = main(list(argv), out=out, stdin=io.StringIO(stdin))
    return code, out.getvalue()


def test_eval_compute():
    assert run("eval", "--backend", "inprocess", "--mode", "compute", "--form", "(+ 1 2)") == (0, "(nil 3)\n")


def test_eval_failure_exits_one():
    assert run("eval", "--backend", "inprocess", "--mode", "query", "--form", "(mv t 1 state)") == (1, "(t nil)\n")


def test_eval_with_capture_prints_captured_line(capsys):
    form = '(mv-let (e v state) (assign x 1) (mv nil (cw "hi~%") state))'
    code, out = run("eval", "--backend", "inprocess", "--mode", "query", "--capture-output", "--form", form)
    assert code == 0
    assert out == '(nil nil)\n(captured "hi\\n")\n'
    assert "hi" in capsys.readouterr().err


def test_eval_quiet_capture_keeps_stderr_clean(capsys):
    code, out = run("eval", "--backend", "inprocess", "--mode", "compute", "--quiet", "--capture-output",
                    "--form", '(cw "psiu~%")')
    assert (code, out) == (0, '(nil nil)\n(captured "psiu\\n")\n')
    assert "psiu" not in capsys.readouterr().err


def test_eval_step_limit():
    code, out = run("eval", "--backend", "inprocess", "--mode", "event", "--step-limit", "0",
                    "--form", "(defconst *k* 1)")
    assert (code, out) == (1, "(t nil)\n")


def test_script_runs_calls_in_order(tmp_path):
    script = tmp_path / "calls.lisp"
    script.write_text(
        "; comentário\n"
        "(compute (+ 1 2))\n"
        "(query (mv nil 5 state))\n"
        "(event (defconst *k* 1))\n"
        "(compute *k*)\n",
        encoding="utf-8",
    )
    assert run("script", "--backend", "inprocess", str(script)) == (0, "(nil 3)\n(nil 5)\n(nil nil)\n(nil 1)\n")


def test_script_with_failure_exits_one(tmp_path):
    script = tmp_path / "calls.lisp"
    script.write_text("(compute (mv 1 2))\n(compute 1)\n", encoding="utf-8")
    assert run("script", "--backend", "inprocess", str(script)) == (1, "(t nil)\n(nil 1)\n")


def test_script_with_bad_line_is_usage_error(tmp_path):
    script = tmp_path / "calls.lisp"
    script.write_text("(avaliar 1)\n", encoding="utf-8")
    assert run("script", "--backend", "inprocess", str(script))[0] == 2


def test_missing_script_is_usage_error(tmp_path):
    assert run("script", "--backend", "inprocess", str(tmp_path / "nao-existe.lisp"))[0] == 2


@pytest.mark.parametrize("argv", [
    [],
    ["eval"],
    ["eval", "--mode", "compute"],
    ["eval", "--mode", "talvez", "--form", "1"],
    ["eval", "--mode", "compute", "--form", "1", "--step-limit", "muitos"],
])
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == 2


def test_unreadable_form_is_usage_error():
    assert run("eval", "--backend", "inprocess", "--mode", "compute", "--form", "(+ 1")[0] == 2


def test_backend_that_cannot_start_exits_three():
    assert run("eval", "--backend", "/nao/existe/prover", "--mode", "compute", "--form", "1")[0] == 3


def test_repl_session():
    stdin = (
        "(event (defconst *r* 2))\n"
        "; comentário\n"
        "(compute (* *r* 3))\n"
        ":capture-on\n"
        "(compute (cw \"eco~%\"))\n"
        ":captured\n"
        ":step-limit\n"
        "(compute\n"
        ":quit\n"
        "(compute 99)\n"
    )
    code, out = run("repl", "--backend", "inprocess", stdin=stdin)
    assert code == 0
    assert out.splitlines() == [
        "(nil nil)",
        "(nil 6)",
        "(nil nil)",
        '(captured "eco\\n")',
        "100000",
    ]


def test_eval_against_subprocess_backend():
    code, out = run("eval", "--mode", "query", "--form", "(mv nil (list 1 2) state)")
    assert (code, out) == (0, "(nil (1 2))\n")
