"""Concrete ASCII syntax for formulas.

Precedence from loosest to tightest: ``<->``, ``->``, ``|``, ``&``, then
prefix operators.  ``&`` and ``|`` associate to the left, ``->`` and
``<->`` to the right.

Prefix forms::

    ~phi   K{i} phi   Kw{i} phi   box{i} phi   dia{i} phi   U phi
    [phi]psi   <phi>psi   [?phi]psi   [$c]psi
    dia{i,$c} phi   dia{i,$c}(phi, psi)   box{i,$c} phi   box{i,$c}(phi, psi)
    Kv{i}($c)   Kv{i}(phi, $c)   Kd{i}($c, $d)   Kh(phi, psi)

``T`` and ``F`` are the constants true and false.  Identifiers that are
not keywords are atoms; constants carry a ``$`` sigil.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import syntax as S


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int


class ParseError(ValueError):
    """Syntax error with the offending span and the expected tokens."""

    def __init__(self, text: str, span: SourceSpan, expected, found: str):
        self.text = text
        self.span = span
        self.expected = frozenset(expected)
        self.found = found
        line = text.count("\n", 0, span.begin) + 1
        col = span.begin - (text.rfind("\n", 0, span.begin) + 1) + 1
        self.line, self.column = line, col
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{line}:{col}: expected {exp}; found {found}")


KEYWORDS = {"K", "Kw", "Kv", "Kh", "Kd", "U", "T", "F", "box", "dia"}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|[~&|()\[\]<>{},?])
  | (?P<const>\$[A-Za-z0-9_]+)
  | (?P<ident>[A-Za-z0-9_]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str   # 'op', 'const', 'ident', 'eof'
    value: str
    begin: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(text, SourceSpan(pos, pos + 1), {"token"}, repr(text[pos]))
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), m.start(), m.end()))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text), len(text)))
    return toks


def _describe(tok: _Tok) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.value)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # -- token helpers -----------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value: str) -> bool:
        return self.tok.kind == "op" and self.tok.value == value

    def error(self, expected):
        t = self.tok
        raise ParseError(self.text, SourceSpan(t.begin, max(t.end, t.begin)),
                         expected, _describe(t))

    def expect(self, value: str) -> _Tok:
        if not self.at(value):
            self.error({repr(value)})
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str) -> str:
        t = self.tok
        if t.kind != "ident":
            self.error({what})
        self.i += 1
        return t.value

    def const(self) -> str:
        t = self.tok
        if t.kind != "const":
            self.error({"constant ($name)"})
        self.i += 1
        return t.value[1:]

    # -- grammar -----------------------------------------------------------
    def parse(self) -> S.Formula:
        phi = self.iff()
        if self.tok.kind != "eof":
            self.error({"'&'", "'|'", "'->'", "'<->'", "end of input"})
        return phi

    def iff(self):
        left = self.implies()
        if self.at("<->"):
            self.i += 1
            return S.Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.at("->"):
            self.i += 1
            return S.Implies(left, self.implies())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("|"):
            self.i += 1
            left = S.Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.prefix()
        while self.at("&"):
            self.i += 1
            left = S.And(left, self.prefix())
        return left

    def braces_agent(self, allow_const: bool):
        self.expect("{")
        agent = self.ident("agent id")
        const = None
        if allow_const and self.at(","):
            self.i += 1
            const = self.const()
        self.expect("}")
        return agent, const

    def prefix(self):
        t = self.tok
        if t.kind == "op":
            if t.value == "~":
                self.i += 1
                return S.Not(self.prefix())
            if t.value == "(":
                self.i += 1
                phi = self.iff()
                self.expect(")")
                return phi
            if t.value == "[":
                return self.bracket()
            if t.value == "<":
                self.i += 1
                ann = self.iff()
                self.expect(">")
                return S.DiaAnnounce(ann, self.prefix())
            self.error({"formula"})
        if t.kind == "ident":
            return self.keyword_or_atom()
        self.error({"formula"})

    def bracket(self):
        self.expect("[")
        if self.at("?"):
            self.i += 1
            ann = self.iff()
            self.expect("]")
            return S.AnnounceWhether(ann, self.prefix())
        if self.tok.kind == "const":
            c = self.const()
            self.expect("]")
            return S.Inspect(c, self.prefix())
        ann = self.iff()
        self.expect("]")
        return S.Announce(ann, self.prefix())

    def keyword_or_atom(self):
        word = self.tok.value
        if word not in KEYWORDS:
            self.i += 1
            return S.Atom(word)
        self.i += 1
        if word == "T":
            return S.TOP
        if word == "F":
            return S.BOTTOM
        if word == "U":
            return S.U(self.prefix())
        if word == "K":
            agent, _ = self.braces_agent(False)
            return S.K(agent, self.prefix())
        if word == "Kw":
            agent, _ = self.braces_agent(False)
            return S.Kw(agent, self.prefix())
        if word == "Kv":
            agent, _ = self.braces_agent(False)
            self.expect("(")
            if self.tok.kind == "const":
                c = self.const()
                self.expect(")")
                return S.Kv(agent, S.TOP, c)
            cond = self.iff()
            self.expect(",")
            c = self.const()
            self.expect(")")
            return S.Kv(agent, cond, c)
        if word == "Kd":
            agent, _ = self.braces_agent(False)
            self.expect("(")
            c = self.const()
            self.expect(",")
            d = self.const()
            self.expect(")")
            return S.kd(agent, c, d)
        if word == "Kh":
            self.expect("(")
            pre = self.iff()
            self.expect(",")
            goal = self.iff()
            self.expect(")")
            return S.Kh(pre, goal)
        # box / dia
        agent, const = self.braces_agent(True)
        if const is None:
            node = S.Box if word == "box" else S.Dia
            return node(agent, self.prefix())
        if self.at("("):
            self.i += 1
            first = self.iff()
            if self.at(","):
                self.i += 1
                second = self.iff()
                self.expect(")")
                node = S.BoxC2 if word == "box" else S.DiaC2
                return node(agent, const, first, second)
            self.expect(")")
            unary = first
        else:
            unary = self.prefix()
        if word == "dia":
            return S.DiaC(agent, const, unary)
        return S.Not(S.DiaC(agent, const, S.Not(unary)))


def parse(text: str) -> S.Formula:
    """Parse a formula; raises :class:`ParseError` on malformed input."""
    return _Parser(text).parse()


def parse_model(text: str):
    """Parse and validate a model from its JSON text."""
    from .models import model_from_json

    return model_from_json(text)
