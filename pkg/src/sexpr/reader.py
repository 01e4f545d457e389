# src/sexpr/reader.py

"""
Leitor de S-expressions.

Suporta inteiros com sinal opcional, strings com escapes, keywords `:nome`,
símbolos com prefixo de pacote `pkg::nome`, o açúcar `'x` e comentários `;`.
Trechos entre barras (`|a b|`, `pkg::|1|`, `:||`) entram literalmente no nome,
com os escapes `\\|`, `\\\\`, `\\n`, `\\t` e `\\r`.
Não existe caminho de avaliação em tempo de leitura: `#`, backquote e vírgula
são recusados com ReaderMacroRejected.
"""

import re
from typing import List, Optional

from src.models.errors import ParseError, ReaderMacroRejected
from .types import QUOTE, Keyword, SExpr, Symbol, make_list

WHITESPACE = " \t\r\n\f"
DELIMITERS = frozenset(WHITESPACE + "()\";'")
READER_MACRO_CHARS = "#`,"
INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
_BAR_ESCAPES = {"|": "|", "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


class _Token:
    """Caracteres de um átomo; `quoted[i]` marca os que vieram de dentro de barras."""

    def __init__(self):
        self.chars: List[str] = []
        self.quoted: List[bool] = []
        self.bars: List[int] = []  # posição em `chars` onde cada trecho |...| começa

    def add(self, c: str, quoted: bool) -> None:
        self.chars.append(c)
        self.quoted.append(quoted)

    @property
    def text(self) -> str:
        return "".join(self.chars)

    def plain(self, i: int, c: str) -> bool:
        return i < len(self.chars) and self.chars[i] == c and not self.quoted[i]

    def package_marker(self) -> Optional[int]:
        for i in range(len(self.chars) - 1):
            if self.plain(i, ":") and self.plain(i + 1, ":"):
                return i
        return None

    def barred_from(self, start: int) -> bool:
        return any(b >= start for b in self.bars)


class SexprReader:
    """Lê S-expressions sequencialmente de um texto."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _error(self, message: str, cls=ParseError):
        line = self.text.count("\n", 0, self.pos) + 1
        return cls(f"linha {line}: {message}")

    def _skip_blank(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n:
            c = text[self.pos]
            if c in WHITESPACE:
                self.pos += 1
            elif c == ";":
                end = text.find("\n", self.pos)
                self.pos = n if end < 0 else end + 1
            else:
                break

    def at_end(self) -> bool:
        self._skip_blank()
        return self.pos >= len(self.text)

    def read(self) -> SExpr:
        if self.at_end():
            raise self._error("fim inesperado da entrada")
        c = self.text[self.pos]
        if c == "(":
            return self._read_list()
        if c == ")":
            raise self._error("')' sem '(' correspondente")
        if c == "'":
            self.pos += 1
            if self.at_end():
                raise self._error("quote sem expressão")
            return (QUOTE, self.read())
        if c == '"':
            return self._read_string()
        if c in READER_MACRO_CHARS:
            raise self._error(f"reader macro recusada: {c!r}", ReaderMacroRejected)
        return self._read_atom()

    def _read_list(self) -> SExpr:
        self.pos += 1
        items: List[SExpr] = []
        while True:
            if self.at_end():
                raise self._error("parênteses desbalanceados: falta ')'")
            if self.text[self.pos] == ")":
                self.pos += 1
                return make_list(items)
            items.append(self.read())

    def _read_string(self) -> str:
        text, n = self.text, len(self.text)
        self.pos += 1
        chunks: List[str] = []
        start = self.pos
        while self.pos < n:
            c = text[self.pos]
            if c == '"':
                chunks.append(text[start:self.pos])
                self.pos += 1
                return "".join(chunks)
            if c == "\\":
                chunks.append(text[start:self.pos])
                if self.pos + 1 >= n:
                    break
                escaped = text[self.pos + 1]
                if escaped not in _ESCAPES:
                    raise self._error(f"escape inválido: \\{escaped}")
                chunks.append(_ESCAPES[escaped])
                self.pos += 2
                start = self.pos
            else:
                self.pos += 1
        raise self._error("string sem aspas de fechamento")

    def _read_bars(self, token: _Token) -> None:
        text, n = self.text, len(self.text)
        token.bars.append(len(token.chars))
        self.pos += 1
        while self.pos < n:
            c = text[self.pos]
            if c == "|":
                self.pos += 1
                return
            if c == "\\":
                escaped = text[self.pos + 1] if self.pos + 1 < n else ""
                if escaped not in _BAR_ESCAPES:
                    raise self._error(f"escape inválido entre barras: \\{escaped}")
                token.add(_BAR_ESCAPES[escaped], True)
                self.pos += 2
            else:
                token.add(c, True)
                self.pos += 1
        raise self._error("símbolo sem '|' de fechamento")

    def _read_atom(self) -> SExpr:
        text, n = self.text, len(self.text)
        start = self.pos
        token = _Token()
        while self.pos < n and text[self.pos] not in DELIMITERS:
            if text[self.pos] == "|":
                self._read_bars(token)
            else:
                token.add(text[self.pos], False)
                self.pos += 1
        raw = text[start:self.pos]
        name = token.text

        if not token.bars:
            if INTEGER_RE.match(name):
                return int(name)
            if name == ".":
                raise self._error("pares pontuados não são suportados")
        if token.plain(0, ":"):
            if token.plain(1, ":") or (len(name) == 1 and not token.barred_from(1)):
                raise self._error(f"keyword inválida: {raw!r}")
            return Keyword(name[1:])
        marker = token.package_marker()
        if marker is not None:
            package, symbol_name = name[:marker], name[marker + 2:]
            if not package or (not symbol_name and not token.barred_from(marker + 2)):
                raise self._error(f"símbolo com pacote inválido: {raw!r}")
            return Symbol(symbol_name, package)
        return Symbol(name)


def read_sexpr(text: str) -> SExpr:
    """Retorna a primeira S-expression completa do texto."""
    reader = SexprReader(text)
    if reader.at_end():
        raise ParseError("entrada vazia")
    return reader.read()


def read_all(text: str) -> List[SExpr]:
    """Lê todas as S-expressions do texto, em ordem."""
    reader = SexprReader(text)
    forms: List[SExpr] = []
    while not reader.at_end():
        forms.append(reader.read())
    return forms
