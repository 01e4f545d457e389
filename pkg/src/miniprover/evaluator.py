# src/miniprover/evaluator.py

"""
Avaliador de termos do miniprover.

Cada chamada de `_eval` é um passo do prover e consome 1 do orçamento; quando
o orçamento chega a zero a avaliação para com StepLimitExceeded. Erros hard e
de limite são sinais internos (exceções) convertidos em resultado por `run`.

As operações são geradores: uma sub-avaliação é pedida com `yield` e o laço de
`_drive` a executa numa pilha explícita. A profundidade da recursão de um termo
fica limitada só pelo orçamento de passos, nunca pela pilha do Python.

Eventos (defconst, defun, defthm, defaults-set) estendem o world recebido no
lugar; quem precisa de reversão passa uma cópia (ver ld.run_ld e apply_event).
"""

from types import GeneratorType
from typing import Any, Callable, Dict, Generator, List, Optional, Tuple

from src.output import StreamClass
from src.sexpr import NIL, T, Keyword, SExpr, Symbol, from_bool, is_nil, list_items, make_list, print_sexpr, truthy
from .values import (
    STATE,
    EvalOutcome,
    HardError,
    HardErrorSignal,
    MultipleValues,
    SoftError,
    StepLimitExceeded,
    StepLimitSignal,
    Stobj,
    Value,
    Values,
    error_triple,
    is_error_triple,
    soft_error_outcome,
)
from .world import STEP_LIMIT, VERBOSITY_LEVEL, Event, FunctionDef, GlobalsTable, World, canonical

Emit = Callable[[StreamClass, str], None]
Env = Dict[Symbol, Value]
# sub-avaliação pendente: recebe os resultados pedidos e devolve o seu com `return`
Pending = Generator["Pending", Any, Any]

STATE_SYMBOL = STATE.name

EVENT_OPERATORS = frozenset({"defconst", "defun", "defthm", "defaults-set", "thm"})


def _ignore_output(stream_class: StreamClass, text: str) -> None:
    pass


def _hard(message: str) -> HardErrorSignal:
    return HardErrorSignal(message)


def _unquote(arg: SExpr) -> SExpr:
    """Nomes de globais e chaves de defaults aceitam `foo` ou `'foo`."""
    if isinstance(arg, tuple) and len(arg) == 2 and isinstance(arg[0], Symbol) and canonical(arg[0]) == Symbol("quote"):
        return arg[1]
    return arg


def format_message(fmt: str, args: List[SExpr]) -> str:
    """Diretivas: `~x` / `~xN` (imprime o argumento), `~%` (nova linha), `~~`."""
    out: List[str] = []
    i, n, next_arg = 0, len(fmt), 0
    while i < n:
        c = fmt[i]
        if c != "~":
            out.append(c)
            i += 1
            continue
        if i + 1 >= n:
            raise _hard("diretiva de formato incompleta no fim da string")
        directive = fmt[i + 1]
        i += 2
        if directive == "%":
            out.append("\n")
        elif directive == "~":
            out.append("~")
        elif directive == "x":
            if i < n and fmt[i].isdigit():
                index = int(fmt[i])
                i += 1
            else:
                index = next_arg
                next_arg += 1
            if index >= len(args):
                raise _hard(f"faltam argumentos para ~x{index}")
            out.append(print_sexpr(args[index]))
        else:
            raise _hard(f"diretiva de formato desconhecida: ~{directive}")
    return "".join(out)


def _drive(root: Pending):
    """Executa `root` e as sub-avaliações que ele pede, numa pilha explícita."""
    stack: List[Pending] = [root]
    sent: Any = None
    signal: Optional[Exception] = None
    while True:
        top = stack[-1]
        try:
            request = top.throw(signal) if signal is not None else top.send(sent)
        except StopIteration as done:
            stack.pop()
            sent, signal = done.value, None
            if not stack:
                return sent
            continue
        except (HardErrorSignal, StepLimitSignal) as raised:
            # o sinal sobe para quem pediu a sub-avaliação (e passa pelos `finally` dele)
            stack.pop()
            if not stack:
                raise
            sent, signal = None, raised
            continue
        stack.append(request)
        sent, signal = None, None


class Evaluator:
    def __init__(self, world: World, globals: GlobalsTable, budget: int, emit: Optional[Emit] = None):
        self.world = world
        self.globals = globals
        self.remaining = budget
        self.steps_used = 0
        self.emit = emit or _ignore_output
        self.last_soft_error: Optional[SoftError] = None

    def step(self) -> None:
        if self.remaining <= 0:
            raise StepLimitSignal()
        self.remaining -= 1
        self.steps_used += 1

    def run(self, form: SExpr, env: Optional[Env] = None) -> EvalOutcome:
        try:
            value = _drive(self._eval(form, dict(env or {})))
        except HardErrorSignal as e:
            return HardError(str(e))
        except StepLimitSignal:
            return StepLimitExceeded()
        if isinstance(value, MultipleValues):
            return Values(value.values)
        return Values((value,))

    # --- núcleo ---

    def _eval(self, form: SExpr, env: Env) -> Pending:
        self.step()
        if isinstance(form, Symbol):
            return self._lookup(form, env)
        if isinstance(form, tuple):
            head, args = form[0], form[1:]
            if not isinstance(head, Symbol):
                raise _hard(f"operador inválido: {print_sexpr(head)}")
            op = canonical(head)
            if op.package is None and op.name in _SPECIAL_FORMS:
                result = getattr(self, _SPECIAL_FORMS[op.name])(args, env)
                if isinstance(result, GeneratorType):
                    result = yield result
                return result
            fn = self.world.functions.get(op)
            if fn is not None:
                return (yield self._call(fn, args, env))
            raise _hard(f"função desconhecida: {print_sexpr(head)}")
        if isinstance(form, bool):
            raise _hard("valor booleano do Python não é um termo")
        return form

    def _lookup(self, symbol: Symbol, env: Env):
        name = canonical(symbol)
        if name == T or name == NIL:
            return name
        if name in env:
            return env[name]
        if name == STATE_SYMBOL:
            return STATE
        if name in self.world.constants:
            return self.world.constants[name]
        raise _hard(f"variável não ligada: {print_sexpr(symbol)}")

    def _value(self, form: SExpr, env: Env) -> Pending:
        value = yield self._eval(form, env)
        if isinstance(value, MultipleValues):
            raise _hard(f"múltiplos valores onde se esperava um único: {print_sexpr(form)}")
        return value

    def _ordinary(self, form: SExpr, env: Env) -> Pending:
        value = yield self._value(form, env)
        if isinstance(value, Stobj):
            raise _hard(f"stobj {value.name.name} usado como valor comum")
        return value

    def _integer(self, form: SExpr, env: Env, op: str) -> Pending:
        value = yield self._ordinary(form, env)
        if not isinstance(value, int):
            raise _hard(f"{op}: argumento não inteiro {print_sexpr(value)}")
        return value

    def _integers(self, args: Tuple, env: Env, op: str) -> Pending:
        values = []
        for a in args:
            values.append((yield self._integer(a, env, op)))
        return values

    @staticmethod
    def _arity(op: str, args: Tuple, expected: int, at_least: bool = False) -> None:
        if (len(args) < expected) if at_least else (len(args) != expected):
            quantifier = "pelo menos " if at_least else ""
            raise _hard(f"{op} espera {quantifier}{expected} argumento(s), recebeu {len(args)}")

    @staticmethod
    def _bind(var: SExpr, value: Value, env: Env, where: str) -> None:
        if not isinstance(var, Symbol):
            raise _hard(f"{where}: variável inválida {print_sexpr(var)}")
        name = canonical(var)
        if (name == STATE_SYMBOL) != isinstance(value, Stobj):
            raise _hard(f"{where}: {name.name} não corresponde a um stobj na mesma posição")
        env[name] = value

    def _soft_error(self, ctx: SExpr, msg: str) -> MultipleValues:
        self.last_soft_error = SoftError(ctx, msg)
        self.emit(StreamClass.STANDARD_CO, f"Error in {print_sexpr(ctx)}: {msg}\n")
        return error_triple(T, NIL)

    # --- formas primitivas ---

    def _op_quote(self, args, env):
        self._arity("quote", args, 1)
        return args[0]

    def _op_if(self, args, env):
        self._arity("if", args, 3)
        test = yield self._ordinary(args[0], env)
        return (yield self._eval(args[1] if truthy(test) else args[2], env))

    def _op_list(self, args, env):
        items = []
        for a in args:
            items.append((yield self._ordinary(a, env)))
        return make_list(items)

    def _op_plus(self, args, env):
        return sum((yield self._integers(args, env, "+")))

    def _op_times(self, args, env):
        product = 1
        for value in (yield self._integers(args, env, "*")):
            product *= value
        return product

    def _op_minus(self, args, env):
        self._arity("-", args, 1, at_least=True)
        values = yield self._integers(args, env, "-")
        if len(values) == 1:
            return -values[0]
        return values[0] - sum(values[1:])

    def _op_less(self, args, env):
        self._arity("<", args, 2)
        left, right = yield self._integers(args, env, "<")
        return from_bool(left < right)

    def _op_equal(self, args, env):
        self._arity("equal", args, 2)
        left = yield self._ordinary(args[0], env)
        right = yield self._ordinary(args[1], env)
        return from_bool(left == right)

    def _op_not(self, args, env):
        self._arity("not", args, 1)
        return from_bool(is_nil((yield self._ordinary(args[0], env))))

    def _op_cons(self, args, env):
        self._arity("cons", args, 2)
        head = yield self._ordinary(args[0], env)
        tail = yield self._ordinary(args[1], env)
        try:
            return (head,) + list_items(tail)
        except TypeError:
            raise _hard("cons: pares pontuados não são suportados")

    def _list_arg(self, op: str, args, env) -> Pending:
        self._arity(op, args, 1)
        value = yield self._ordinary(args[0], env)
        try:
            return list_items(value)
        except TypeError:
            raise _hard(f"{op}: não é uma lista {print_sexpr(value)}")

    def _op_car(self, args, env):
        items = yield self._list_arg("car", args, env)
        return items[0] if items else NIL

    def _op_cdr(self, args, env):
        return make_list((yield self._list_arg("cdr", args, env))[1:])

    def _op_consp(self, args, env):
        self._arity("consp", args, 1)
        return from_bool(isinstance((yield self._ordinary(args[0], env)), tuple))

    def _op_zp(self, args, env):
        self._arity("zp", args, 1)
        value = yield self._ordinary(args[0], env)
        return from_bool(not isinstance(value, int) or value <= 0)

    # --- múltiplos valores e state ---

    def _op_mv(self, args, env):
        self._arity("mv", args, 2, at_least=True)
        values = []
        for a in args:
            values.append((yield self._value(a, env)))
        return MultipleValues(tuple(values))

    def _op_mv_let(self, args, env):
        self._arity("mv-let", args, 3)
        try:
            variables = list_items(args[0])
        except TypeError:
            raise _hard("mv-let: lista de variáveis inválida")
        produced = yield self._eval(args[1], env)
        if not isinstance(produced, MultipleValues) or len(produced.values) != len(variables):
            got = len(produced.values) if isinstance(produced, MultipleValues) else 1
            raise _hard(f"mv-let espera {len(variables)} valores, recebeu {got}")
        inner = dict(env)
        for var, value in zip(variables, produced.values):
            self._bind(var, value, inner, "mv-let")
        return (yield self._eval(args[2], inner))

    @staticmethod
    def _global_name(arg: SExpr, op: str) -> Symbol:
        arg = _unquote(arg)
        if not isinstance(arg, Symbol):
            raise _hard(f"{op}: nome de global inválido {print_sexpr(arg)}")
        return arg

    def _expect_state(self, form: SExpr, env: Env, op: str) -> Pending:
        if (yield self._value(form, env)) != STATE:
            raise _hard(f"{op}: o último argumento deve ser state")

    def _op_boundp_global(self, args, env):
        self._arity("boundp-global", args, 2)
        name = self._global_name(args[0], "boundp-global")
        yield self._expect_state(args[1], env, "boundp-global")
        return from_bool(name in self.globals)

    def _op_at(self, args, env):
        self._arity("@", args, 1)
        name = self._global_name(args[0], "@")
        if name not in self.globals:
            raise _hard(f"global não ligado: {print_sexpr(name)}")
        return self.globals.get(name)

    def _op_assign(self, args, env):
        self._arity("assign", args, 2)
        name = self._global_name(args[0], "assign")
        value = yield self._eval(args[1], env)
        if isinstance(value, (MultipleValues, Stobj)):
            raise _hard(f"assign de {print_sexpr(name)} exige um único valor que não seja stobj")
        self.globals.set(name, value)
        return error_triple(NIL, value)

    # --- saída e erros ---

    def _message(self, args, env, op: str) -> Pending:
        fmt = yield self._ordinary(args[0], env)
        if not isinstance(fmt, str):
            raise _hard(f"{op}: a mensagem deve ser uma string")
        values = []
        for a in args[1:]:
            values.append((yield self._ordinary(a, env)))
        return format_message(fmt, values)

    def _op_er(self, args, env):
        self._arity("er", args, 3, at_least=True)
        kind = canonical(args[0]) if isinstance(args[0], Symbol) else None
        if kind not in (Symbol("soft"), Symbol("hard")):
            raise _hard(f"er: tipo de erro desconhecido {print_sexpr(args[0])}")
        ctx = yield self._ordinary(args[1], env)
        msg = yield self._message(args[2:], env, "er")
        if kind == Symbol("hard"):
            raise _hard(f"{print_sexpr(ctx)}: {msg}")
        return self._soft_error(ctx, msg)

    def _op_cw(self, args, env):
        self._arity("cw", args, 1, at_least=True)
        self.emit(StreamClass.COMMENT_WINDOW, (yield self._message(args, env, "cw")))
        return NIL

    def _op_with_prover_step_limit(self, args, env):
        self._arity("with-prover-step-limit", args, 2)
        limit = yield self._ordinary(args[0], env)
        if is_nil(limit):
            result = yield self._eval(args[1], env)
        else:
            if not isinstance(limit, int) or limit < 0:
                raise _hard(f"limite de passos inválido: {print_sexpr(limit)}")
            # só estreita: um limite acima do que resta não amplia o orçamento
            outer = self.remaining
            inner = min(limit, outer)
            self.remaining = inner
            try:
                result = yield self._eval(args[1], env)
            finally:
                self.remaining = outer - (inner - self.remaining)
        if not (isinstance(result, MultipleValues) and is_error_triple(result.values)):
            raise _hard("with-prover-step-limit exige um error triple no corpo")
        return result

    # --- tabela de defaults ---

    @staticmethod
    def _defaults_key(arg: SExpr) -> Keyword:
        arg = _unquote(arg)
        if isinstance(arg, Keyword):
            return arg
        if isinstance(arg, Symbol):
            return Keyword(arg.name)
        raise _hard(f"chave de defaults inválida: {print_sexpr(arg)}")

    def _op_defaults_get(self, args, env):
        self._arity("defaults-get", args, 1)
        return self.world.defaults.get(self._defaults_key(args[0]), NIL)

    def _op_defaults_set(self, args, env):
        self._arity("defaults-set", args, 2)
        key = self._defaults_key(args[0])
        value = yield self._eval(args[1], env)
        ctx = Symbol("defaults-set")
        if isinstance(value, (MultipleValues, Stobj)):
            return self._soft_error(ctx, f"o valor de {key.name} deve ser único e não-stobj")
        if key in (STEP_LIMIT, VERBOSITY_LEVEL) and (not isinstance(value, int) or value < 0):
            return self._soft_error(ctx, f"{key.name} deve ser um inteiro não negativo, recebido {print_sexpr(value)}")
        self.world.defaults[key] = value
        self.world.events.append(Event(key, "defaults-set", (ctx, Symbol(key.name), value)))
        return error_triple(NIL, key)

    # --- eventos ---

    def _event_name(self, arg: SExpr, op: str) -> Symbol:
        if not isinstance(arg, Symbol) or arg in (T, NIL):
            raise _hard(f"{op}: nome inválido {print_sexpr(arg)}")
        return canonical(arg)

    def _op_defconst(self, args, env):
        self._arity("defconst", args, 2)
        name = self._event_name(args[0], "defconst")
        ctx = Symbol("defconst")
        if len(name.name) < 3 or not (name.name.startswith("*") and name.name.endswith("*")):
            return self._soft_error(ctx, f"o nome de uma constante deve ter a forma *nome*: {print_sexpr(name)}")
        if self.world.is_defined(name):
            return self._soft_error(ctx, f"{print_sexpr(name)} já está definido")
        value = yield self._eval(args[1], {})
        if isinstance(value, (MultipleValues, Stobj)):
            return self._soft_error(ctx, f"o corpo de {print_sexpr(name)} deve produzir um único valor não-stobj")
        self.world.constants[name] = value
        self.world.events.append(Event(name, "defconst", (ctx, name, args[1])))
        return error_triple(NIL, name)

    def _op_defun(self, args, env):
        self._arity("defun", args, 3)
        name = self._event_name(args[0], "defun")
        ctx = Symbol("defun")
        if name.package is None and name.name in _SPECIAL_FORMS:
            return self._soft_error(ctx, f"{name.name} é uma primitiva e não pode ser redefinida")
        if self.world.is_defined(name):
            return self._soft_error(ctx, f"{print_sexpr(name)} já está definido")
        try:
            raw_params = list_items(args[1])
        except TypeError:
            return self._soft_error(ctx, "a lista de parâmetros deve ser uma lista")
        if not all(isinstance(p, Symbol) for p in raw_params):
            return self._soft_error(ctx, "parâmetros devem ser símbolos")
        params = tuple(canonical(p) for p in raw_params)
        if len(set(params)) != len(params):
            return self._soft_error(ctx, "parâmetros repetidos")
        self.world.functions[name] = FunctionDef(name, params, args[2])
        self.world.events.append(Event(name, "defun", (ctx, name, make_list(params), args[2])))
        return error_triple(NIL, name)

    def _prove(self, term: SExpr, label: str) -> Pending:
        """Tenta o teorema avaliando o termo fechado; devolve o erro soft quando falha."""
        verbose = self.world.verbosity > 0
        if verbose:
            self.emit(StreamClass.PROOFS_CO, f"Proof attempt for {label}\n")
        value = yield self._eval(term, {})
        ctx = Symbol("thm")
        if isinstance(value, (MultipleValues, Stobj)):
            return self._soft_error(ctx, "a conjectura deve produzir um único valor não-stobj")
        if is_nil(value):
            if verbose:
                self.emit(StreamClass.PROOFS_CO, "Proof failed.\n")
            return self._soft_error(ctx, f"a conjectura {label} é falsa")
        if verbose:
            self.emit(StreamClass.PROOFS_CO, "Q.E.D.\n")
        return None

    def _op_thm(self, args, env):
        self._arity("thm", args, 1)
        failure = yield self._prove(args[0], print_sexpr(args[0]))
        return failure or error_triple(NIL, NIL)

    def _op_defthm(self, args, env):
        self._arity("defthm", args, 2)
        name = self._event_name(args[0], "defthm")
        if self.world.is_defined(name):
            return self._soft_error(Symbol("defthm"), f"{print_sexpr(name)} já está definido")
        failure = yield self._prove(args[1], print_sexpr(name))
        if failure is not None:
            return failure
        self.world.theorems[name] = args[1]
        self.world.events.append(Event(name, "defthm", (Symbol("defthm"), name, args[1])))
        return error_triple(NIL, name)

    # --- funções do usuário ---

    def _call(self, fn: FunctionDef, args, env) -> Pending:
        self._arity(fn.name.name, args, len(fn.params))
        inner: Env = {}
        for param, arg in zip(fn.params, args):
            self._bind(param, (yield self._value(arg, env)), inner, fn.name.name)
        return (yield self._eval(fn.body, inner))


_SPECIAL_FORMS = {
    "quote": "_op_quote",
    "if": "_op_if",
    "list": "_op_list",
    "+": "_op_plus",
    "-": "_op_minus",
    "*": "_op_times",
    "<": "_op_less",
    "equal": "_op_equal",
    "not": "_op_not",
    "cons": "_op_cons",
    "car": "_op_car",
    "cdr": "_op_cdr",
    "consp": "_op_consp",
    "zp": "_op_zp",
    "mv": "_op_mv",
    "mv-let": "_op_mv_let",
    "boundp-global": "_op_boundp_global",
    "@": "_op_at",
    "assign": "_op_assign",
    "er": "_op_er",
    "cw": "_op_cw",
    "with-prover-step-limit": "_op_with_prover_step_limit",
    "defaults-get": "_op_defaults_get",
    "defaults-set": "_op_defaults_set",
    "defconst": "_op_defconst",
    "defun": "_op_defun",
    "defthm": "_op_defthm",
    "thm": "_op_thm",
}


def eval_form(form: SExpr, env: Optional[Env], world: World, globals: GlobalsTable, budget: int,
              emit: Optional[Emit] = None) -> EvalOutcome:
    """Avalia um termo sem alterar `world` (eventos agem sobre uma cópia)."""
    return Evaluator(world.copy(), globals, budget, emit).run(form, env)


def apply_event(form: SExpr, world: World, globals: Optional[GlobalsTable] = None,
                budget: Optional[int] = None, emit: Optional[Emit] = None) -> Tuple[EvalOutcome, World]:
    """Executa um evento; devolve o world estendido no sucesso e o original na falha."""
    head = form[0] if isinstance(form, tuple) and form else None
    if not isinstance(head, Symbol) or canonical(head).name not in EVENT_OPERATORS:
        return HardError(f"não é um evento: {print_sexpr(form)}"), world
    working = world.copy()
    evaluator = Evaluator(working, globals if globals is not None else GlobalsTable(),
                          budget if budget is not None else working.step_limit, emit)
    outcome = soft_error_outcome(evaluator.run(form), evaluator.last_soft_error)
    if isinstance(outcome, Values):
        return outcome, working
    return outcome, world
