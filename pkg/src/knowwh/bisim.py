"""Standard bisimulation, Delta-bisimulation and NCL equivalence.

Greatest relations are computed by deleting pairs from the
atom-agreement relation until nothing changes.  For Delta-bisimulation
the refinement step is still monotone: a larger candidate relation makes
the Zig/Zag guard ("two successors not related by Z") fire less often and
makes the required matches easier to find, so the deletion sequence
decreases to the greatest fixed point.  The result is re-checked against
the definition anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .models import KripkeModel, disjoint_union, require_world
from .semantics import compile_model

STANDARD = "standard"
DELTA = "delta"


class BisimulationError(RuntimeError):
    """The computed relation fails its own definition."""


@dataclass(frozen=True)
class BisimResult:
    holds: bool
    relation: Optional[frozenset] = None

    def __bool__(self):
        return self.holds


def _mode(mode) -> str:
    if mode in (True, DELTA, "Δ"):
        return DELTA
    if mode in (False, None, STANDARD):
        return STANDARD
    raise ValueError(f"unknown bisimulation mode {mode!r}")


def _members(mask: int, n: int) -> list:
    return [v for v in range(n) if mask >> v & 1]


def _guard(succ: list, z: list) -> bool:
    """Delta guard: the world has two different successors not related by ``z``."""
    for a in succ:
        for b in succ:
            if a != b and not z[a] >> b & 1:
                return True
    return False


def _pair_ok(st, s: int, t: int, z: list, mode: str) -> bool:
    for agent, succ in st.succ.items():
        ss, ts = _members(succ[s], st.n), _members(succ[t], st.n)
        check_s = check_t = True
        if mode == DELTA:
            check_s = _guard(ss, z)
            check_t = _guard(ts, z)
        if check_s and any(z[u] & succ[t] == 0 for u in ss):
            return False
        if check_t and any(not any(z[u] >> v & 1 for u in ss) for v in ts):
            return False
    return True


def _atom_agreement(st) -> list:
    n = st.n
    z = [0] * n
    for s in range(n):
        for t in range(n):
            if all((m >> s & 1) == (m >> t & 1) for m in st.val.values()):
                z[s] |= 1 << t
    return z


def _greatest(st, mode: str) -> list:
    """Greatest (Delta-)bisimulation as per-world masks of related worlds."""
    z = _atom_agreement(st)
    changed = True
    while changed:
        changed = False
        new = list(z)
        for s in range(st.n):
            for t in _members(z[s], st.n):
                if not _pair_ok(st, s, t, z, mode):
                    new[s] &= ~(1 << t)
                    changed = True
        z = new
    return z


def _as_pairs(st, z: list) -> frozenset:
    return frozenset((st.worlds[s], st.worlds[t]) for s in range(st.n) for t in _members(z[s], st.n))


def verify_bisim(m: KripkeModel, relation, mode=STANDARD) -> bool:
    """Check the defining clauses for a relation on a single model."""
    mode = _mode(mode)
    st = compile_model(m.base)
    z = [0] * st.n
    for a, b in relation:
        z[st.index[a]] |= 1 << st.index[b]
    if not any(z):
        return False
    for s in range(st.n):
        for t in _members(z[s], st.n):
            if any((v >> s & 1) != (v >> t & 1) for v in st.val.values()):
                return False
            if not _pair_ok(st, s, t, z, mode):
                return False
    return True


def max_bisim(m: KripkeModel, mode=STANDARD) -> frozenset:
    """Greatest bisimulation (or Delta-bisimulation) on one model, as a
    set of world pairs."""
    mode = _mode(mode)
    st = compile_model(m.base)
    rel = _as_pairs(st, _greatest(st, mode))
    if rel and not verify_bisim(m, rel, mode):
        raise BisimulationError(f"greatest {mode} relation fails verification")
    return rel


def check_bisim(m1, s1: str, m2, s2: str, mode=STANDARD) -> BisimResult:
    """Are the pointed models bisimilar?  Both notions are computed on the
    disjoint union.  The witness is the greatest relation on the union,
    with worlds tagged ``1:`` and ``2:``."""
    require_world(m1, s1)
    require_world(m2, s2)
    union, inj1, inj2 = disjoint_union(m1.base, m2.base)
    rel = max_bisim(union, mode)
    if (inj1[s1], inj2[s2]) in rel:
        return BisimResult(True, rel)
    return BisimResult(False, None)


# ---------------------------------------------------------------------------
# NCL equivalence by partition refinement


def _refine(st, block: list) -> list:
    """One round: split by the truth of Kw_i X for every union X of
    current blocks.  That truth pattern at w is determined by the set of
    blocks met by w's successors when there are at least two of them
    (the singleton X's recover the set), and is constantly true otherwise.
    """
    sigs = []
    for w in range(st.n):
        parts = [block[w]]
        for agent in sorted(st.succ):
            hit = frozenset(block[v] for v in _members(st.succ[agent][w], st.n))
            parts.append(hit if len(hit) >= 2 else None)
        sigs.append(tuple(parts))
    return _renumber(sigs)


def _renumber(sigs: list) -> list:
    ids: dict = {}
    return [ids.setdefault(s, len(ids)) for s in sigs]


def _ncl_blocks(m1, m2, letters, depth: Optional[int]):
    union, inj1, inj2 = disjoint_union(m1.base, m2.base)
    st = compile_model(union)
    if letters is None:
        letters = sorted(st.val)
    letters = list(letters)
    block = _renumber([tuple(st.val.get(p, 0) >> w & 1 for p in letters) for w in range(st.n)])
    rounds = 0
    while depth is None or rounds < depth:
        new = _refine(st, block)
        rounds += 1
        if len(set(new)) == len(set(block)):
            break
        block = new
    return st, block, inj1, inj2


def ncl_equiv_bounded(m1, s1: str, m2, s2: str, depth: int, letters=None) -> bool:
    """Do the points agree on all NCL formulas of modal depth at most
    ``depth`` over ``letters`` (default: every atom of either model)?"""
    require_world(m1, s1)
    require_world(m2, s2)
    st, block, inj1, inj2 = _ncl_blocks(m1, m2, letters, depth)
    return block[st.index[inj1[s1]]] == block[st.index[inj2[s2]]]


def ncl_equivalent(m1, s1: str, m2, s2: str, letters=None) -> bool:
    """Agreement on every NCL formula (refinement run to stability)."""
    require_world(m1, s1)
    require_world(m2, s2)
    st, block, inj1, inj2 = _ncl_blocks(m1, m2, letters, None)
    return block[st.index[inj1[s1]]] == block[st.index[inj2[s2]]]
