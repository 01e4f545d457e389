# tests/generators.py

"""Geradores determinísticos (random.Random com semente) usados pelos testes de propriedade."""

import random

from src.sexpr import NIL, T, Keyword, Symbol

SYMBOL_NAMES = ["foo", "bar", "x", "mv-let", "state", "+", "-", "*", "<=", "a1", "nil", "t", "with-prover-step-limit"]
# nomes que só voltam iguais do leitor se o printer os puser entre barras
AWKWARD_NAMES = [
    "", "1", "-5", "+7", ".", ":k", "a b", "x::y", "a|b", "barra\\", "(abre", "fecha)", "ponto;virgula",
    "aspa'", 'aspas"', "#cerquilha", "vir,gula", "crase`", "linha\nnova", "tab\tulado", "a:", "ç:λ",
]
PACKAGES = [None, None, None, "acl2", "pkg", "p:q", "com espaço"]
STRING_ALPHABET = list("abcxyz012 ~") + ['"', "\\", "\n", "\t", "\r", "é", "ç", "中", "λ"]


def random_name(rng: random.Random) -> str:
    roll = rng.random()
    if roll < 0.15:
        return rng.choice(AWKWARD_NAMES)
    if roll < 0.55:
        return rng.choice(SYMBOL_NAMES)
    return rng.choice("abcdefghij") + "".join(rng.choice("abcdefghij0123456789-*") for _ in range(rng.randint(0, 6)))


def random_atom(rng: random.Random):
    kind = rng.randrange(6)
    if kind == 0:
        return rng.randint(-10**30, 10**30) if rng.random() < 0.2 else rng.randint(-1000, 1000)
    if kind == 1:
        return "".join(rng.choice(STRING_ALPHABET) for _ in range(rng.randint(0, 12)))
    if kind == 2:
        return Keyword(random_name(rng))
    if kind == 3:
        return rng.choice([T, NIL])
    return Symbol(random_name(rng), rng.choice(PACKAGES))


def random_sexpr(rng: random.Random, depth: int = 4):
    if depth <= 0 or rng.random() < 0.45:
        return random_atom(rng)
    return tuple(random_sexpr(rng, depth - 1) for _ in range(rng.randint(1, 5)))


# --- formas com assinatura realizada conhecida ---

def _single_value(rng: random.Random):
    choice = rng.randrange(5)
    if choice == 0:
        return rng.randint(-50, 50)
    if choice == 1:
        return (Symbol("+"), rng.randint(0, 9), rng.randint(0, 9))
    if choice == 2:
        return (Symbol("list"), rng.randint(0, 9), (Symbol("quote"), Symbol(random_name(rng))))
    if choice == 3:
        return (Symbol("quote"), random_sexpr(rng, 2))
    return rng.choice([T, NIL, "texto", Keyword("k")])


def random_signature_form(rng: random.Random):
    """Forma cujo resultado cobre: valor único, stobj, mv de aridade 2 a 4, erro soft e erro hard."""
    kind = rng.randrange(9)
    if kind == 0:
        return _single_value(rng)
    if kind == 1:
        return Symbol("state")
    if kind in (2, 3):
        arity = rng.randint(2, 4)
        values = [_single_value(rng) for _ in range(arity)]
        if rng.random() < 0.5:
            values[-1] = Symbol("state")
        return (Symbol("mv"),) + tuple(values)
    if kind == 4:
        erp = rng.choice([NIL, NIL, T, 1])
        return (Symbol("mv"), erp, _single_value(rng), Symbol("state"))
    if kind == 5:
        return (Symbol("er"), Symbol("soft"), (Symbol("quote"), Symbol("ctx")), "falhou ~x0", _single_value(rng))
    if kind == 6:
        return rng.choice([
            (Symbol("er"), Symbol("hard"), (Symbol("quote"), Symbol("ctx")), "quebrou"),
            Symbol("variavel-livre"),
            (Symbol("car"), 5),
            (Symbol("operador-desconhecido"), 1),
            (Symbol("mv-let"), (Symbol("a"), Symbol("b")), (Symbol("mv"), 1, 2, 3), Symbol("a")),
        ])
    if kind == 7:
        inner = random_signature_form(rng)
        return (Symbol("if"), (Symbol("boundp-global"), Symbol("nunca-atribuido"), Symbol("state")),
                _single_value(rng), inner)
    return (Symbol("mv-let"), (Symbol("e"), Symbol("v"), Symbol("state")),
            (Symbol("mv"), NIL, _single_value(rng), Symbol("state")),
            rng.choice([Symbol("v"), (Symbol("mv"), Symbol("e"), Symbol("v"), Symbol("state"))]))
