"""Concrete syntax for ALDL_f formulas, LTL_f formulas and traces.

Formula grammar, loosest binding first::

    phi  ::= phi "|" phi | phi "&" phi
           | "!" phi | "<" path ">" phi | "[" path "]" phi
           | "true" | "false" | ident | "(" phi ")"
    path ::= "@" ident | rex
    rex  ::= rex "+" rex | rex ";" rex | rex "*"
           | prop | "back(" prop ")" | "{" phi "}?" | "eps" | "(" rex ")"

A parenthesised group inside a path is read as a proposition when it is one,
so ``(p | q)*`` is a star over the single label ``p | q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from aldlf import syntax as S
from aldlf.frontends import ltlf as L
from aldlf.frontends.regex import Concat, EPS, Epsilon, Star, Union, regex_to_automaton
from aldlf.semantics import Trace

KEYWORDS = {"true", "false", "eps", "back"}
IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!&|<>\[\](){}?;+*@])|(?P<bad>\S))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", a symbol, or "eof"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def where(offset):
        line = sum(1 for s in line_starts if s <= offset)
        return line, offset - line_starts[line - 1] + 1

    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        start = m.start(m.lastgroup)
        line, col = where(start)
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", line, col)
        kind = "ident" if m.lastgroup == "ident" else m.group("sym")
        tokens.append(Token(kind, m.group(m.lastgroup), line, col))
    line, col = where(len(text))
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, defs: Mapping[str, S.PathAutomaton] | None = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.defs = dict(defs or {})

    # -- helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            want = text or kind
            got = self.tok.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        t = self.tok
        self.pos += 1
        return t

    def accept(self, kind: str, text: str | None = None) -> bool:
        if self.at(kind, text):
            self.pos += 1
            return True
        return False

    def finish(self):
        if not self.at("eof"):
            raise self.error(f"unexpected {self.tok.text!r}")

    def ident(self) -> str:
        t = self.expect("ident")
        if t.text in KEYWORDS:
            raise self.error(f"{t.text!r} is a reserved word", t)
        return t.text

    # -- formulas
    def formula(self) -> S.Formula:
        left = self.conj()
        while self.accept("|"):
            left = S.Or(left, self.conj())
        return left

    def conj(self) -> S.Formula:
        left = self.unary()
        while self.accept("&"):
            left = S.And(left, self.unary())
        return left

    def unary(self) -> S.Formula:
        if self.accept("!"):
            return S.Not(self.unary())
        if self.accept("<"):
            a = self.path(">")
            return S.Diamond(a, self.unary())
        if self.accept("["):
            a = self.path("]")
            return S.Box(a, self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("ident", "true"):
            return S.Prop(S.TRUE)
        if self.accept("ident", "false"):
            return S.Prop(S.FALSE)
        return S.Prop(S.Atom(self.ident()))

    # -- paths
    def path(self, close: str) -> S.PathAutomaton:
        if self.accept("@"):
            t = self.tok
            name = self.ident()
            if name not in self.defs:
                raise self.error(f"unknown automaton @{name}", t)
            a = self.defs[name]
        else:
            a = regex_to_automaton(self.rex_union())
        self.expect(close)
        return a

    def rex_union(self):
        left = self.rex_concat()
        while self.accept("+"):
            left = Union(left, self.rex_concat())
        return left

    def rex_concat(self):
        left = self.rex_star()
        while self.accept(";"):
            left = Concat(left, self.rex_star())
        return left

    def rex_star(self):
        e = self.rex_atom()
        while self.accept("*"):
            e = Star(e)
        return e

    def rex_atom(self):
        if self.accept("ident", "eps"):
            return EPS
        if self.at("ident", "back"):
            self.pos += 1
            self.expect("(")
            z = self.prop()
            self.expect(")")
            return S.Past(z)
        if self.accept("{"):
            f = self.formula()
            self.expect("}")
            self.expect("?")
            return S.Test(f)
        if self.at("("):
            mark = self.pos
            try:
                return S.Future(self.prop())
            except ParseError:
                self.pos = mark
            self.expect("(")
            e = self.rex_union()
            self.expect(")")
            return e
        return S.Future(self.prop())

    # -- propositional labels
    def prop(self) -> S.PropFormula:
        left = self.prop_conj()
        while self.accept("|"):
            left = S.PropOr(left, self.prop_conj())
        return left

    def prop_conj(self) -> S.PropFormula:
        left = self.prop_unary()
        while self.accept("&"):
            left = S.PropAnd(left, self.prop_unary())
        return left

    def prop_unary(self) -> S.PropFormula:
        if self.accept("!"):
            return S.PropNot(self.prop_unary())
        if self.accept("("):
            z = self.prop()
            self.expect(")")
            return z
        if self.accept("ident", "true"):
            return S.TRUE
        if self.accept("ident", "false"):
            return S.FALSE
        return S.Atom(self.ident())


def parse_formula(text: str, defs: Mapping[str, S.PathAutomaton] | None = None) -> S.Formula:
    p = _Parser(text, defs)
    f = p.formula()
    p.finish()
    return f


def parse_prop(text: str) -> S.PropFormula:
    p = _Parser(text)
    z = p.prop()
    p.finish()
    return z


def parse_path(text: str, defs: Mapping[str, S.PathAutomaton] | None = None):
    """Parse a path expression (not a named automaton)."""
    p = _Parser(text, defs)
    e = p.rex_union()
    p.finish()
    return e


# ---------------------------------------------------------------------- LTL_f


class _LtlParser(_Parser):
    """``|`` < ``&`` < ``U`` (right associative) < ``!``/``X``."""

    def formula(self):
        left = self.conj()
        while self.accept("|"):
            left = L.Or(left, self.conj())
        return left

    def conj(self):
        left = self.until()
        while self.accept("&"):
            left = L.And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        if self.accept("ident", "U"):
            return L.Until(left, self.until())
        return left

    def unary(self):
        if self.accept("!"):
            return L.Not(self.unary())
        if self.accept("ident", "X"):
            return L.Next(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.accept("ident", "true"):
            return L.Const(True)
        if self.accept("ident", "false"):
            return L.Const(False)
        t = self.tok
        name = self.ident()
        if name in ("X", "U"):
            raise self.error(f"{name!r} is an operator", t)
        return L.Atom(name)


def parse_ltlf(text: str) -> L.LtlfFormula:
    p = _LtlParser(text)
    f = p.formula()
    p.finish()
    return f


# --------------------------------------------------------------------- traces


def parse_trace(text: str) -> Trace:
    """One instant per line; ``-`` is the empty instant, ``#`` starts a comment."""
    instants = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "-":
            instants.append(frozenset())
            continue
        names = line.split()
        for name in names:
            if not IDENT.fullmatch(name) or name in KEYWORDS:
                raise ParseError(f"bad atom name {name!r}", lineno, raw.index(name) + 1)
        instants.append(frozenset(names))
    if not instants:
        raise ParseError("empty trace", 1, 1)
    return Trace(instants)


def format_trace(t: Trace) -> str:
    return "".join((" ".join(sorted(x)) or "-") + "\n" for x in t)


# ------------------------------------------------------------------- printing

_PREC = {S.Or: 1, S.And: 2}


def format_prop(z: S.PropFormula, ctx: int = 0) -> str:
    if isinstance(z, S.Atom):
        return z.name
    if isinstance(z, S.TrueProp):
        return "true"
    if isinstance(z, S.FalseProp):
        return "false"
    if isinstance(z, S.PropNot):
        return "!" + format_prop(z.arg, 3)
    prec, op = (1, "|") if isinstance(z, S.PropOr) else (2, "&")
    text = f"{format_prop(z.left, prec)} {op} {format_prop(z.right, prec + 1)}"
    return f"({text})" if prec < ctx else text


def _label_text(lab, defs) -> str:
    if isinstance(lab, S.Future):
        text = format_prop(lab.prop, 3)
        return text
    if isinstance(lab, S.Past):
        return f"back({format_prop(lab.prop)})"
    return "{" + format_formula(lab.formula, defs) + "}?"


def format_rex(e, defs=None, ctx: int = 0) -> str:
    if isinstance(e, (S.Future, S.Past, S.Test)):
        return _label_text(e, defs)
    if isinstance(e, Epsilon):
        return "eps"
    if isinstance(e, Star):
        return format_rex(e.arg, defs, 3) + "*"
    prec, op = (1, " + ") if isinstance(e, Union) else (2, " ; ")
    text = format_rex(e.left, defs, prec) + op + format_rex(e.right, defs, prec + 1)
    return f"({text})" if prec < ctx else text


def _path_text(a: S.PathAutomaton, defs) -> str:
    if a.source is not None and regex_to_automaton(a.source) == a:
        return format_rex(a.source, defs)
    if a.name is not None and (defs is None or defs.get(a.name, a) == a):
        if defs is not None:
            defs.setdefault(a.name, a)
        return "@" + a.name
    if defs is None:
        raise ValueError("anonymous automaton needs a defs dictionary to be printed")
    for name, b in defs.items():
        if b == a:
            return "@" + name
    n = len(defs)
    while f"U{n}" in defs:
        n += 1
    defs[f"U{n}"] = a
    return f"@U{n}"


def format_formula(f: S.Formula, defs: dict | None = None, ctx: int = 0) -> str:
    """Print ``f`` in the concrete grammar.

    Automata without a path expression or name are registered in ``defs``
    under fresh names and printed as references.
    """
    if isinstance(f, S.Prop):
        # propositional and formula connectives share one precedence scale
        return format_prop(f.prop, ctx)
    if isinstance(f, S.Not):
        return "!" + format_formula(f.arg, defs, 3)
    if isinstance(f, S.Diamond):
        return f"<{_path_text(f.automaton, defs)}> {format_formula(f.arg, defs, 3)}"
    if isinstance(f, S.Box):
        return f"[{_path_text(f.automaton, defs)}] {format_formula(f.arg, defs, 3)}"
    prec = _PREC[type(f)]
    op = " | " if prec == 1 else " & "
    text = format_formula(f.left, defs, prec) + op + format_formula(f.right, defs, prec + 1)
    return f"({text})" if prec < ctx else text


def format_ltlf(f: L.LtlfFormula, ctx: int = 0) -> str:
    if isinstance(f, L.Atom):
        return f.name
    if isinstance(f, L.Const):
        return "true" if f.value else "false"
    if isinstance(f, L.Not):
        return "!" + format_ltlf(f.arg, 4)
    if isinstance(f, L.Next):
        return "X " + format_ltlf(f.arg, 4)
    if isinstance(f, L.Until):
        text = f"{format_ltlf(f.left, 4)} U {format_ltlf(f.right, 3)}"
        return f"({text})" if ctx > 3 else text
    prec, op = (1, " | ") if isinstance(f, L.Or) else (2, " & ")
    text = format_ltlf(f.left, prec) + op + format_ltlf(f.right, prec + 1)
    return f"({text})" if prec < ctx else text
