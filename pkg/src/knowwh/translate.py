"""Syntactic translations between the fragments and schema builders."""

from __future__ import annotations

from . import syntax as S


def ncl_to_ml(phi: S.Formula) -> S.Formula:
    """Replace every ``Kw{i} a`` by ``box{i} a | box{i} ~a``."""

    def step(node):
        if isinstance(node, S.Kw):
            return S.Or(S.Box(node.agent, node.sub), S.Box(node.agent, S.Not(node.sub)))
        return node

    return S.transform(phi, step)


def ml_to_ncl_reflexive(phi: S.Formula) -> S.Formula:
    """Replace ``box{i} a`` (and ``K{i} a``) by ``a & Kw{i} a``.

    Truth-preserving on reflexive models only.  ``dia{i} a`` is read as
    ``~box{i} ~a`` first.
    """

    def step(node):
        if isinstance(node, (S.Box, S.K)):
            return S.And(node.sub, S.Kw(node.agent, node.sub))
        if isinstance(node, S.Dia):
            neg = S.Not(node.sub)
            return S.Not(S.And(neg, S.Kw(node.agent, neg)))
        return node

    return S.transform(phi, step)


def ad_instance(psi: S.Formula, phi: S.Formula, agent: str) -> S.Formula:
    """``~Kw{i}psi -> (box{i}phi <-> (Kw{i}phi & Kw{i}(psi -> phi)))``."""
    return S.Implies(
        S.Not(S.Kw(agent, psi)),
        S.Iff(S.Box(agent, phi),
              S.And(S.Kw(agent, phi), S.Kw(agent, S.Implies(psi, phi)))))


def expand_binary_diamond(phi: S.Formula, psi: S.Formula, agent: str, const: str) -> S.Formula:
    """Unary-only formula equivalent to ``dia{i,$c}(phi, psi)`` on ternary
    models satisfying symmetry, inclusion and anti-Euclideanness."""
    dc = lambda x: S.DiaC(agent, const, x)  # noqa: E731
    d = lambda x: S.Dia(agent, x)  # noqa: E731
    first = S.And(dc(phi), d(psi))
    second = S.And(dc(psi), d(phi))
    third = S.conj([d(phi), d(psi), S.Not(dc(phi)), S.Not(dc(psi)), dc(S.Or(phi, psi))])
    return S.Or(S.Or(first, second), third)


def mlkv_to_elkv(phi: S.Formula) -> S.Formula:
    """Read box/dia as K and the value-diamond ``dia{i,$c} a`` as
    ``~Kv{i}(a, $c)``; binary value-diamonds go through the expansion."""

    def rec(node):
        if isinstance(node, S.Box):
            return S.K(node.agent, rec(node.sub))
        if isinstance(node, S.Dia):
            return S.Not(S.K(node.agent, S.Not(rec(node.sub))))
        if isinstance(node, S.DiaC):
            return S.Not(S.Kv(node.agent, rec(node.sub), node.const))
        if isinstance(node, S.DiaC2):
            return rec(expand_binary_diamond(node.left, node.right, node.agent, node.const))
        if isinstance(node, S.BoxC2):
            inner = S.DiaC2(node.agent, node.const, S.Not(node.left), S.Not(node.right))
            return S.Not(rec(inner))
        kids = S.children(node)
        if not kids:
            return node
        return S._rebuild(node, tuple(rec(k) for k in kids))

    return rec(phi)


def expand_diamonds(phi: S.Formula) -> S.Formula:
    """Replace every binary value-diamond (and its dual box) by the
    unary-only expansion, innermost first."""

    def step(node):
        if isinstance(node, S.DiaC2):
            return expand_binary_diamond(node.left, node.right, node.agent, node.const)
        if isinstance(node, S.BoxC2):
            neg = expand_binary_diamond(S.Not(node.left), S.Not(node.right), node.agent, node.const)
            return S.Not(neg)
        return node

    return S.transform(phi, step)
