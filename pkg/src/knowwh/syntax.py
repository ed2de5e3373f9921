"""Formula AST shared by every logic in the package.

Nodes are frozen dataclasses, so formulas compare and hash structurally.
``Or``/``Implies``/``Iff`` and the dual forms (``Dia``, ``DiaAnnounce``,
``BoxC2``) are kept as first-class nodes; :func:`desugar` maps everything
onto the core connectives when a canonical form is needed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    # Operator sugar for building formulas in Python code.
    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __rshift__(self, other: "Formula") -> "Formula":
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class K(Formula):
    """Agent knows that ``sub``."""

    agent: str
    sub: Formula


@dataclass(frozen=True)
class Kw(Formula):
    """Agent knows whether ``sub`` (the non-contingency operator)."""

    agent: str
    sub: Formula


@dataclass(frozen=True)
class Kv(Formula):
    """Agent knows the value of ``const`` given ``cond``."""

    agent: str
    cond: Formula
    const: str


@dataclass(frozen=True)
class Announce(Formula):
    """``[ann]body``: after truthfully announcing ``ann``, ``body`` holds."""

    ann: Formula
    body: Formula


@dataclass(frozen=True)
class DiaAnnounce(Formula):
    """``<ann>body``: ``ann`` is true and ``body`` holds after announcing it."""

    ann: Formula
    body: Formula


@dataclass(frozen=True)
class AnnounceWhether(Formula):
    """``[?ann]body``: after announcing the actual truth value of ``ann``."""

    ann: Formula
    body: Formula


@dataclass(frozen=True)
class Inspect(Formula):
    """``[$c]body``: after publicly revealing the actual value of ``const``."""

    const: str
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class Dia(Formula):
    agent: str
    sub: Formula


@dataclass(frozen=True)
class DiaC(Formula):
    """Unary value-diamond; same truth condition as ``DiaC2(a, c, sub, sub)``."""

    agent: str
    const: str
    sub: Formula


@dataclass(frozen=True)
class DiaC2(Formula):
    """Two successors disagreeing on ``const``, one ``left`` and one ``right``."""

    agent: str
    const: str
    left: Formula
    right: Formula


@dataclass(frozen=True)
class BoxC2(Formula):
    """Dual of :class:`DiaC2`."""

    agent: str
    const: str
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Kh(Formula):
    """Knowing how to achieve ``goal`` given ``pre``."""

    pre: Formula
    goal: Formula


TOP = Top()
BOTTOM = Bottom()

BINARY_BOOL = (And, Or, Implies, Iff)


def U(sub: Formula) -> Formula:
    """Universal modality, defined as ``Kh(~sub, F)``."""
    return Kh(Not(sub), BOTTOM)


def kd(agent: str, c: str, d: str) -> Formula:
    """Knowledge of dependence of ``d`` on ``c``: ``K{i}[$c]Kv{i}($d)``."""
    return K(agent, Inspect(c, Kv(agent, TOP, d)))


def kd_set(agent: str, given, targets) -> Formula:
    """Set form ``K{i}[$d1]...[$dn](Kv{i}($e1) & ... & Kv{i}($em))``."""
    targets = list(targets)
    if not targets:
        raise ValueError("kd_set needs at least one target constant")
    body = conj(Kv(agent, TOP, e) for e in targets)
    for c in reversed(list(given)):
        body = Inspect(c, body)
    return K(agent, body)


def conj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# Traversal helpers


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Top, Bottom, Atom)):
        return ()
    if isinstance(phi, Not):
        return (phi.sub,)
    if isinstance(phi, BINARY_BOOL):
        return (phi.left, phi.right)
    if isinstance(phi, (K, Kw, Box, Dia, DiaC)):
        return (phi.sub,)
    if isinstance(phi, Kv):
        return (phi.cond,)
    if isinstance(phi, (Announce, DiaAnnounce, AnnounceWhether)):
        return (phi.ann, phi.body)
    if isinstance(phi, Inspect):
        return (phi.body,)
    if isinstance(phi, (DiaC2, BoxC2)):
        return (phi.left, phi.right)
    if isinstance(phi, Kh):
        return (phi.pre, phi.goal)
    raise TypeError(f"not a formula: {phi!r}")


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Pre-order walk over every subformula occurrence, ``phi`` included."""
    stack = [phi]
    while stack:
        f = stack.pop()
        yield f
        stack.extend(reversed(children(f)))


def atoms(phi: Formula) -> list[str]:
    """Atom names in order of first occurrence."""
    seen: dict[str, None] = {}
    for f in subformulas(phi):
        if isinstance(f, Atom):
            seen.setdefault(f.name)
    return list(seen)


def agents(phi: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for f in subformulas(phi):
        a = getattr(f, "agent", None)
        if a is not None:
            seen.setdefault(a)
    return list(seen)


def constants(phi: Formula) -> list[str]:
    seen: dict[str, None] = {}
    for f in subformulas(phi):
        c = getattr(f, "const", None)
        if c is not None:
            seen.setdefault(c)
    return list(seen)


def operators(phi: Formula) -> set[type]:
    """Node types occurring in ``phi`` other than the boolean connectives."""
    return {type(f) for f in subformulas(phi)} - _BOOLEAN


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def modal_depth(phi: Formula) -> int:
    """Nesting depth of modal operators; announcements add the depth of
    the announced formula, Kh counts as one level."""
    if isinstance(phi, (Top, Bottom, Atom)):
        return 0
    if isinstance(phi, Not) or isinstance(phi, BINARY_BOOL):
        return max(modal_depth(c) for c in children(phi))
    if isinstance(phi, (Announce, DiaAnnounce, AnnounceWhether)):
        return modal_depth(phi.ann) + modal_depth(phi.body)
    if isinstance(phi, Inspect):
        return modal_depth(phi.body)
    return 1 + max(modal_depth(c) for c in children(phi))


# ---------------------------------------------------------------------------
# Fragments


class FragmentTag(enum.Enum):
    EL = "EL"
    NCL = "NCL"
    ELKVR = "ELKv^r"
    PALKVR = "PALKv^r"
    PILKV = "PILKv"
    MLKV = "MLKv"
    LKH = "L_Kh"
    MIXED = "MIXED"


_BOOLEAN = {Top, Bottom, Atom, Not, And, Or, Implies, Iff}
_EL_OPS = {K, Box, Dia}
_PAL_OPS = {Announce, DiaAnnounce, AnnounceWhether}

FRAGMENT_OPS: dict[FragmentTag, frozenset] = {
    FragmentTag.EL: frozenset(_EL_OPS),
    FragmentTag.NCL: frozenset({Kw} | _PAL_OPS),
    FragmentTag.ELKVR: frozenset(_EL_OPS | {Kv}),
    FragmentTag.PALKVR: frozenset(_EL_OPS | {Kv} | _PAL_OPS),
    FragmentTag.PILKV: frozenset(_EL_OPS | {Kv, Inspect}),
    FragmentTag.MLKV: frozenset({Box, Dia, DiaC, DiaC2, BoxC2}),
    FragmentTag.LKH: frozenset({Kh}),
}

# Strict order among the named fragments (MIXED sits above everything).
_BELOW = {
    FragmentTag.EL: {FragmentTag.NCL, FragmentTag.ELKVR, FragmentTag.PALKVR,
                     FragmentTag.PILKV, FragmentTag.MLKV, FragmentTag.LKH},
    FragmentTag.ELKVR: {FragmentTag.PALKVR, FragmentTag.PILKV},
}


def fragment(phi: Formula) -> FragmentTag:
    """Smallest named fragment whose operators cover those of ``phi``.

    Purely propositional formulas are classified as EL, the bottom of
    the order.  So are formulas whose only modal operators are
    announcements: they lie in both NCL and PALKv^r, and EL is the one
    tag below both.
    """
    ops = operators(phi)
    if ops <= _BOOLEAN | _PAL_OPS:
        return FragmentTag.EL
    for tag, allowed in FRAGMENT_OPS.items():
        if ops <= allowed:
            return tag
    return FragmentTag.MIXED


def fragment_leq(a: FragmentTag, b: FragmentTag) -> bool:
    if a == b or b == FragmentTag.MIXED:
        return True
    return b in _BELOW.get(a, ())


# ---------------------------------------------------------------------------
# Rewriting


def _rebuild(phi: Formula, args: tuple) -> Formula:
    if isinstance(phi, Not):
        return Not(*args)
    if isinstance(phi, BINARY_BOOL + (Announce, DiaAnnounce, AnnounceWhether, Kh)):
        return type(phi)(*args)
    if isinstance(phi, (K, Kw, Box, Dia)):
        return type(phi)(phi.agent, *args)
    if isinstance(phi, Kv):
        return Kv(phi.agent, args[0], phi.const)
    if isinstance(phi, Inspect):
        return Inspect(phi.const, args[0])
    if isinstance(phi, DiaC):
        return DiaC(phi.agent, phi.const, args[0])
    if isinstance(phi, (DiaC2, BoxC2)):
        return type(phi)(phi.agent, phi.const, *args)
    raise TypeError(f"not a formula: {phi!r}")


def transform(phi: Formula, fn) -> Formula:
    """Bottom-up rewrite: ``fn`` is applied to every rebuilt node."""
    kids = children(phi)
    if kids:
        phi = _rebuild(phi, tuple(transform(k, fn) for k in kids))
    return fn(phi)


def subst(phi: Formula, p: str, psi: Formula) -> Formula:
    """Uniform substitution of ``psi`` for every occurrence of atom ``p``."""
    return subst_many(phi, {p: psi})


def subst_many(phi: Formula, mapping: dict[str, Formula]) -> Formula:
    """Simultaneous substitution of atoms by formulas."""

    def step(f):
        if isinstance(f, Atom) and f.name in mapping:
            return mapping[f.name]
        return f

    return transform(phi, step)


def desugar(phi: Formula) -> Formula:
    """Rewrite onto the core connectives: Not/And, K, Kw, Kv, Box,
    DiaC2, the two primitive announcements, Inspect and Kh."""

    def step(f):
        if isinstance(f, Or):
            return Not(And(Not(f.left), Not(f.right)))
        if isinstance(f, Implies):
            return Not(And(f.left, Not(f.right)))
        if isinstance(f, Iff):
            return And(Not(And(f.left, Not(f.right))),
                       Not(And(f.right, Not(f.left))))
        if isinstance(f, Dia):
            return Not(Box(f.agent, Not(f.sub)))
        if isinstance(f, DiaAnnounce):
            return Not(Announce(f.ann, Not(f.body)))
        if isinstance(f, DiaC):
            return DiaC2(f.agent, f.const, f.sub, f.sub)
        if isinstance(f, BoxC2):
            return Not(DiaC2(f.agent, f.const, Not(f.left), Not(f.right)))
        return f

    return transform(phi, step)


def equivalent_syntax(a: Formula, b: Formula) -> bool:
    """Structural equality modulo :func:`desugar`."""
    return desugar(a) == desugar(b)


# ---------------------------------------------------------------------------
# Printing

_BIN_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _prefix(head: str, sub: Formula) -> str:
    body = to_text(sub)
    return head + body if body.startswith("(") else f"{head} {body}"


def to_text(phi: Formula) -> str:
    """Canonical concrete syntax; ``parse(to_text(phi)) == phi``."""
    if isinstance(phi, Top):
        return "T"
    if isinstance(phi, Bottom):
        return "F"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Not):
        return "~" + to_text(phi.sub)
    if isinstance(phi, BINARY_BOOL):
        return f"({to_text(phi.left)} {_BIN_SYMBOL[type(phi)]} {to_text(phi.right)})"
    if isinstance(phi, K):
        return _prefix(f"K{{{phi.agent}}}", phi.sub)
    if isinstance(phi, Kw):
        return _prefix(f"Kw{{{phi.agent}}}", phi.sub)
    if isinstance(phi, Kv):
        if isinstance(phi.cond, Top):
            return f"Kv{{{phi.agent}}}(${phi.const})"
        return f"Kv{{{phi.agent}}}({to_text(phi.cond)}, ${phi.const})"
    if isinstance(phi, Announce):
        return _prefix(f"[{to_text(phi.ann)}]", phi.body)
    if isinstance(phi, DiaAnnounce):
        return _prefix(f"<{to_text(phi.ann)}>", phi.body)
    if isinstance(phi, AnnounceWhether):
        return _prefix(f"[?{to_text(phi.ann)}]", phi.body)
    if isinstance(phi, Inspect):
        return _prefix(f"[${phi.const}]", phi.body)
    if isinstance(phi, Box):
        return _prefix(f"box{{{phi.agent}}}", phi.sub)
    if isinstance(phi, Dia):
        return _prefix(f"dia{{{phi.agent}}}", phi.sub)
    if isinstance(phi, DiaC):
        return _prefix(f"dia{{{phi.agent},${phi.const}}}", phi.sub)
    if isinstance(phi, DiaC2):
        return f"dia{{{phi.agent},${phi.const}}}({to_text(phi.left)}, {to_text(phi.right)})"
    if isinstance(phi, BoxC2):
        return f"box{{{phi.agent},${phi.const}}}({to_text(phi.left)}, {to_text(phi.right)})"
    if isinstance(phi, Kh):
        if isinstance(phi.pre, Not) and isinstance(phi.goal, Bottom):
            return _prefix("U", phi.pre.sub)
        return f"Kh({to_text(phi.pre)}, {to_text(phi.goal)})"
    raise TypeError(f"not a formula: {phi!r}")


print_formula = to_text
