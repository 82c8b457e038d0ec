"""Concrete grammar: recursive-descent parser and minimal-parentheses printer.

Precedence, tightest first: ``~``, ``K[a]``, ``Ki[a]``, ``[phi]``, ``<phi>``;
then ``&``; then ``|``; then ``->`` (right-associative); then ``<->``.
``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    And,
    Announce,
    AtLeastDepth,
    Atom,
    BOTTOM,
    Diamond,
    ExactDepth,
    Formula,
    Iff,
    Implies,
    Knows,
    KnowsInf,
    Not,
    Or,
    TOP,
)

KEYWORDS = {"K", "Ki", "E", "P", "true", "false"}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        text = f"{line}:{column}: {message}"
        if expected:
            text += f" (expected one of: {', '.join(sorted(expected))})"
        super().__init__(text)


@dataclass(frozen=True)
class Token:
    kind: str  # punctuation text, "INT", "NEGINT", "IDENT", "KW" or "EOF"
    text: str
    line: int
    column: int


_LEXEME = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)"
    r"|(?P<punct><->|->|[~&|\[\]<>(),])"
    r"|(?P<negint>-[0-9]+)"
    r"|(?P<word>[A-Za-z0-9_]+)"
)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _LEXEME.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {source[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind == "punct":
            tokens.append(Token(text, text, line, col))
        elif kind == "negint":
            tokens.append(Token("NEGINT", text, line, col))
        elif kind == "word":
            if text.isdigit():
                tokens.append(Token("INT", text, line, col))
            elif text in KEYWORDS:
                tokens.append(Token("KW", text, line, col))
            else:
                tokens.append(Token("IDENT", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


_UNARY_START = frozenset({"~", "K", "Ki", "[", "<", "true", "false", "identifier", "E", "P", "("})


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected: frozenset[str] | set[str], message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise FormulaSyntaxError(message or f"unexpected {found}", t.line, t.column, frozenset(expected))

    def at(self, text: str) -> bool:
        t = self.tok
        return t.text == text and t.kind in (text, "KW")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error({text})
        t = self.tok
        self.i += 1
        return t

    def parse(self) -> Formula:
        f = self.phi()
        if self.tok.kind != "EOF":
            self.error({"&", "|", "->", "<->", "end of input"})
        return f

    def phi(self) -> Formula:
        f = self.imp()
        while self.at("<->"):
            self.i += 1
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("|"):
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("&"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def agent(self) -> str:
        t = self.tok
        if t.kind in ("IDENT", "INT"):
            self.i += 1
            return t.text
        self.error({"agent name"})

    def depth_literal(self) -> int:
        t = self.tok
        if t.kind == "NEGINT":
            self.error({"non-negative integer"}, f"negative depth literal {t.text}")
        if t.kind != "INT":
            self.error({"non-negative integer"})
        self.i += 1
        return int(t.text)

    def unary(self) -> Formula:
        t = self.tok
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("K") or self.at("Ki"):
            self.i += 1
            self.expect("[")
            a = self.agent()
            self.expect("]")
            cls = Knows if t.text == "K" else KnowsInf
            return cls(a, self.unary())
        if self.at("["):
            self.i += 1
            announced = self.phi()
            self.expect("]")
            return Announce(announced, self.unary())
        if self.at("<"):
            self.i += 1
            announced = self.phi()
            self.expect(">")
            return Diamond(announced, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.tok
        if self.at("true"):
            self.i += 1
            return TOP
        if self.at("false"):
            self.i += 1
            return BOTTOM
        if t.kind == "IDENT":
            self.i += 1
            return Atom(t.text)
        if self.at("E") or self.at("P"):
            self.i += 1
            self.expect("[")
            a = self.agent()
            self.expect(",")
            d = self.depth_literal()
            self.expect("]")
            return ExactDepth(a, d) if t.text == "E" else AtLeastDepth(a, d)
        if self.at("("):
            self.i += 1
            f = self.phi()
            self.expect(")")
            return f
        self.error(_UNARY_START)


def parse(source: str) -> Formula:
    """Parse formula text into a core syntax tree (sugar expanded)."""
    return _Parser(source).parse()


def _render_unary(f: Formula) -> str:
    s = render(f)
    return f"({s})" if isinstance(f, And) else s


def render(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that parse back to the same tree."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, ExactDepth):
        return f"E[{f.agent},{f.d}]"
    if isinstance(f, AtLeastDepth):
        return f"P[{f.agent},{f.d}]"
    if isinstance(f, Not):
        return "~" + _render_unary(f.sub)
    if isinstance(f, Knows):
        return f"K[{f.agent}] " + _render_unary(f.sub)
    if isinstance(f, KnowsInf):
        return f"Ki[{f.agent}] " + _render_unary(f.sub)
    if isinstance(f, Announce):
        return f"[{render(f.announced)}] " + _render_unary(f.body)
    if isinstance(f, And):
        # '&' folds to the left, so only a right-hand conjunction needs parentheses
        return f"{render(f.left)} & {_render_unary(f.right)}"
    raise TypeError(f"not a formula: {f!r}")

