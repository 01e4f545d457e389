# src/cli.py

"""
Linha de comando.

    python -m src eval --mode compute --form "(+ 1 2)"      -> (nil 3)
    python -m src script caminho/para/arquivo.lisp
    python -m src repl
    python -m src pool --workers 4 --listen 127.0.0.1:7070
    python -m src miniprover

Resultados saem no stdout como S-expressions canônicas `(erp val)`; a saída do
prover repassada (passthrough) e os logs vão para o stderr.

Códigos de saída: 0 sem erro, 1 quando algum resultado tem erp, 2 para erro de
uso ou de leitura, 3 quando o backend falha.
"""

import argparse
import shlex
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple

from src.bridge import (
    BridgeOptions,
    QueryResult,
    Session,
    capture_output_off,
    capture_output_on,
    get_captured_output,
    get_prover_step_limit,
    quiet_mode_off,
    quiet_mode_on,
)
from src.bridge.interface import MODES
from src.config import Config
from src.models.errors import BridgeError, BridgeUsageError, ParseError, TransportError
from src.sexpr import SExpr, Symbol, print_sexpr, read_all, read_sexpr
from src.utils.observability import log_with_context, setup_logging, track_performance

logger = log_with_context(component="Cli")

EXIT_OK, EXIT_ERP, EXIT_USAGE, EXIT_BACKEND = 0, 1, 2, 3

CAPTURED = Symbol("captured")
INPROCESS = "inprocess"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"\n{self.prog}: erro: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prover-bridge", description="Bridge para provers no estilo REPL.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    call_options = _Parser(add_help=False)
    call_options.add_argument("--backend", default=None,
                              help='"CMD ARGS...", tcp://HOST:PORT (pool) ou inprocess')
    call_options.add_argument("--quiet", action="store_true")
    call_options.add_argument("--capture-output", action="store_true")
    call_options.add_argument("--step-limit", type=int, default=None)

    eval_cmd = sub.add_parser("eval", parents=[call_options], help="avalia uma forma")
    eval_cmd.add_argument("--mode", required=True, choices=sorted(MODES))
    eval_cmd.add_argument("--form", required=True)

    script_cmd = sub.add_parser("script", parents=[call_options], help="roda pares (modo forma) de um arquivo")
    script_cmd.add_argument("file", type=Path)

    sub.add_parser("repl", parents=[call_options], help="sessão interativa")

    pool_cmd = sub.add_parser("pool", help="servidor de pool TCP")
    pool_cmd.add_argument("--workers", type=int, default=None)
    pool_cmd.add_argument("--listen", default=None, help="HOST:PORT")
    pool_cmd.add_argument("--backend", default=None, help='comando do worker, ex.: "python -m src miniprover"')
    pool_cmd.add_argument("--max-wait-ms", type=int, default=None)
    pool_cmd.add_argument("--status-port", type=int, default=None)

    sub.add_parser("miniprover", help="backend miniatura no stdio")
    return parser


@contextmanager
def open_session(backend: Optional[str], passthrough: TextIO) -> Iterator[Session]:
    backend = backend or Config.BACKEND
    if backend == INPROCESS:
        with Session.in_process(passthrough) as session:
            yield session
    elif backend and backend.startswith("tcp://"):
        from src.pool import PoolClient
        with PoolClient(backend) as client, client.session(passthrough=passthrough) as session:
            yield session
    else:
        with Session.spawn(shlex.split(backend) if backend else None, passthrough) as session:
            yield session


def _options(args) -> BridgeOptions:
    return BridgeOptions(quiet=args.quiet, capture_output=args.capture_output,
                         prover_step_limit=args.step_limit)


def _emit_result(result: QueryResult, session: Session, capture: bool, out: TextIO) -> None:
    print(str(result), file=out)
    if capture:
        print(print_sexpr((CAPTURED, get_captured_output(session))), file=out)
    out.flush()


def _parse_script(text: str) -> List[Tuple[str, SExpr]]:
    calls = []
    for item in read_all(text):
        if not (isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], Symbol)
                and item[0].name in MODES):
            raise BridgeUsageError(f"linha de script deve ser (modo forma): {print_sexpr(item)}")
        calls.append((item[0].name, item[1]))
    return calls


@track_performance
def run_eval(args, out: TextIO) -> int:
    form = read_sexpr(args.form)
    with open_session(args.backend, sys.stderr) as session:
        result = MODES[args.mode](session, form, _options(args))
        _emit_result(result, session, args.capture_output, out)
    return EXIT_OK if result.ok else EXIT_ERP


@track_performance
def run_script(args, out: TextIO) -> int:
    calls = _parse_script(args.file.read_text(encoding="utf-8"))
    opts = _options(args)
    all_ok = True
    with open_session(args.backend, sys.stderr) as session:
        for mode, form in calls:
            result = MODES[mode](session, form, opts)
            _emit_result(result, session, args.capture_output, out)
            all_ok = all_ok and result.ok
    return EXIT_OK if all_ok else EXIT_ERP


def run_repl(args, out: TextIO, stdin: TextIO) -> int:
    opts = _options(args)
    interactive = stdin.isatty()
    with open_session(args.backend, sys.stderr) as session:
        commands = {
            ":quiet-on": lambda: quiet_mode_on(session),
            ":quiet-off": lambda: quiet_mode_off(session),
            ":capture-on": lambda: capture_output_on(session),
            ":capture-off": lambda: capture_output_off(session),
            ":captured": lambda: print(print_sexpr((CAPTURED, get_captured_output(session))), file=out),
            ":step-limit": lambda: print(get_prover_step_limit(session), file=out),
        }
        while True:
            if interactive:
                sys.stderr.write("bridge> ")
                sys.stderr.flush()
            line = stdin.readline()
            if not line:
                break
            line = line.strip()
            if not line or line.startswith(";"):
                continue
            if line == ":quit":
                break
            if line in commands:
                commands[line]()
                out.flush()
                continue
            try:
                for mode, form in _parse_script(line):
                    _emit_result(MODES[mode](session, form, opts), session, opts.capture_output, out)
            except (ParseError, BridgeUsageError) as e:
                print(f"erro: {e}", file=sys.stderr)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
         stdin: Optional[TextIO] = None) -> int:
    setup_logging(Config.LOG_LEVEL)
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.command == "miniprover":
        from src.miniprover import serve_stdio
        return serve_stdio()
    if args.command == "pool":
        from src.pool import PoolConfig, serve
        try:
            config = PoolConfig.from_cli(args.workers, args.listen, args.backend,
                                         args.max_wait_ms, args.status_port)
        except ValueError as e:
            print(f"erro: {e}", file=sys.stderr)
            return EXIT_USAGE
        try:
            serve(config)
        except (TransportError, OSError) as e:
            print(f"erro: falha ao subir o pool: {e}", file=sys.stderr)
            return EXIT_BACKEND
        return EXIT_OK

    try:
        if args.command == "eval":
            return run_eval(args, out)
        if args.command == "script":
            return run_script(args, out)
        return run_repl(args, out, stdin or sys.stdin)
    except (ParseError, BridgeUsageError, ValueError, OSError) as e:
        print(f"erro: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TransportError, BridgeError) as e:
        print(f"erro: backend indisponível: {e}", file=sys.stderr)
        return EXIT_BACKEND
