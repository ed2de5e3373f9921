"""Exhaustive enumeration of small structures.

Relations on ``n`` worlds are coded as ``n*n``-bit integers, bit
``w*n + v`` standing for the edge ``w -> v``.  Frames are kept only in
their canonical form: the numerically least code among all world
renamings (for several agents, the least tuple).  Valuations are not
enumerated here; the search module feeds all of them to the vectorised
evaluator in one batch.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from ..models import (FOEpistemicModel, FrameClass, KripkeModel, LtsModel, TernaryModel,
                      masks_in_class)
from ..semantics import Structure


class BudgetTooLarge(ValueError):
    """The requested enumeration exceeds the configured cap."""


@dataclass
class Candidate:
    """One valuation-free structure plus the worlds to evaluate at."""

    st: Structure
    points: int
    build: Callable            # (valuation dict atom -> mask) -> model


def code_to_masks(code: int, n: int) -> tuple:
    full = (1 << n) - 1
    return tuple((code >> (w * n)) & full for w in range(n))


def _perm_tables(n: int, perms) -> np.ndarray:
    """``T[k, code]`` is ``code`` renamed by the k-th permutation."""
    codes = np.arange(1 << (n * n), dtype=np.int64)
    out = np.zeros((len(perms), codes.size), dtype=np.int64)
    for k, p in enumerate(perms):
        acc = np.zeros_like(codes)
        for w in range(n):
            for v in range(n):
                acc |= ((codes >> (w * n + v)) & 1) << (p[w] * n + p[v])
        out[k] = acc
    return out


@lru_cache(maxsize=None)
def _allowed_codes(n: int, cls: FrameClass) -> np.ndarray:
    codes = [c for c in range(1 << (n * n)) if masks_in_class(n, code_to_masks(c, n), cls)]
    return np.array(codes, dtype=np.int64)


@lru_cache(maxsize=None)
def canonical_frames(n: int, agents: int, cls: FrameClass, cap: int) -> tuple:
    """Canonical frames on ``n`` worlds, as tuples of relation codes."""
    allowed = _allowed_codes(n, cls)
    raw = allowed.size ** agents
    if raw > cap:
        raise BudgetTooLarge(f"{raw} raw frames on {n} worlds with {agents} agents exceed cap {cap}")
    perms = list(itertools.permutations(range(n)))
    table = _perm_tables(n, perms)
    base = 1 << (n * n)
    grids = np.meshgrid(*([allowed] * agents), indexing="ij")
    combos = np.stack([g.ravel() for g in grids], axis=1)       # (raw, agents)
    key = np.zeros(combos.shape[0], dtype=object if base ** agents >= 2 ** 62 else np.int64)
    for a in range(agents):
        key = key * base + combos[:, a]
    best = key.copy()
    for k in range(len(perms)):
        pk = np.zeros_like(key)
        for a in range(agents):
            pk = pk * base + table[k][combos[:, a]]
        best = np.minimum(best, pk)
    keep = combos[key == best]
    return tuple(tuple(int(x) for x in row) for row in keep)


@lru_cache(maxsize=None)
def rooted_frames(n: int, agents: int, depth: int, cap: int) -> tuple:
    """Frames generated from world 0 in which worlds at distance
    ``depth`` or more have no outgoing edges, up to renamings fixing 0.

    Returns tuples ``(codes, distances)``.
    """
    raw = (1 << (n * n)) ** agents
    if raw > cap:
        raise BudgetTooLarge(f"{raw} raw rooted frames exceed cap {cap}")
    perms = [(0,) + p for p in itertools.permutations(range(1, n))]
    table = _perm_tables(n, perms)
    out = []
    for codes in itertools.product(range(1 << (n * n)), repeat=agents):
        succs = [code_to_masks(c, n) for c in codes]
        dist = _distances(n, succs)
        if dist is None:
            continue
        if any(dist[w] >= depth and any(s[w] for s in succs) for w in range(n)):
            continue
        if any(tuple(int(table[k][c]) for c in codes) < codes for k in range(len(perms))):
            continue
        out.append((codes, dist))
    return tuple(out)


def _distances(n: int, succs) -> Optional[tuple]:
    dist = [None] * n
    dist[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for w in frontier:
            for s in succs:
                for v in range(n):
                    if s[w] >> v & 1 and dist[v] is None:
                        dist[v] = dist[w] + 1
                        nxt.append(v)
        frontier = nxt
    if any(d is None for d in dist):
        return None
    return tuple(dist)


def value_patterns(n: int, max_values: int) -> list:
    """Assignments of value indices to worlds up to renaming of values
    (restricted growth strings)."""
    out = []

    def rec(prefix, used):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(min(used + 1, max_values)):
            rec(prefix + [v], max(used, v + 1))

    rec([], 0)
    return out


@lru_cache(maxsize=None)
def legal_pair_sets(n: int, succ: int, conditions: tuple) -> tuple:
    """All sets of ordered pairs ``(u, v)`` usable as one world's slice of
    a ternary relation, given that world's successor mask."""
    pool = [v for v in range(n) if succ >> v & 1] if "inclusion" in conditions else list(range(n))
    if "symmetry" in conditions:
        units = [((u, v), (v, u)) if u != v else ((u, u),)
                 for u, v in itertools.combinations_with_replacement(pool, 2)]
    else:
        units = [((u, v),) for u in pool for v in pool]
    succ_list = [v for v in range(n) if succ >> v & 1]
    out = []
    for k in range(len(units) + 1):
        for pick in itertools.combinations(units, k):
            pairs = frozenset(p for unit in pick for p in unit)
            if "anti-euclidean" in conditions and not all(
                    (w, u) in pairs or (w, v) in pairs for (u, v) in pairs for w in succ_list):
                continue
            out.append(tuple(sorted(pairs)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Knowing-how tables


@lru_cache(maxsize=None)
def _belief_images(n: int) -> np.ndarray:
    """``F[code, b]``: image of belief ``b`` under relation ``code``, or -1."""
    size = 1 << (n * n)
    out = np.full((size, 1 << n), -1, dtype=np.int64)
    for code in range(size):
        succ = code_to_masks(code, n)
        for b in range(1 << n):
            img = 0
            ok = True
            for w in range(n):
                if b >> w & 1:
                    if succ[w] == 0:
                        ok = False
                        break
                    img |= succ[w]
            if ok:
                out[code, b] = img
    return out


@lru_cache(maxsize=None)
def _row_lookup(n: int) -> np.ndarray:
    """For a set of reachable beliefs (as a bitmask over beliefs), the row
    of goals ``G`` containing at least one of them."""
    nb = 1 << n
    rows = np.zeros((1 << nb, nb), dtype=bool)
    goals = np.arange(nb)
    for reach in range(1 << nb):
        for b in range(nb):
            if reach >> b & 1:
                rows[reach] |= (b & ~goals) == 0
    return rows


@lru_cache(maxsize=None)
def kh_tables(n: int, actions: int, cap: int) -> tuple:
    """Distinct knowing-how tables of LTSs with ``n`` states and at most
    ``actions`` actions, up to state renaming.

    Returns tuples ``(table, codes)`` where ``codes`` is one relation code
    per action of a representative LTS.  Action order is irrelevant to
    the table, so only multisets of relations are generated.
    """
    size = 1 << (n * n)
    nb = 1 << n
    if nb > 16:
        raise BudgetTooLarge(f"knowing-how tables over {n} states are too large")
    combos = list(itertools.combinations_with_replacement(range(size), actions))
    if len(combos) > cap:
        raise BudgetTooLarge(f"{len(combos)} LTS configurations exceed cap {cap}")
    combos = np.array(combos, dtype=np.int64).reshape(len(combos), actions)
    images = _belief_images(n)
    rows_of = _row_lookup(n)
    rows = np.zeros((combos.shape[0], nb, nb), dtype=bool)
    for pre in range(nb):
        reach = np.full(combos.shape[0], 1 << pre, dtype=np.int64)
        while True:
            before = reach.copy()
            for b in range(nb):
                has = (reach >> b) & 1 == 1
                if not has.any():
                    continue
                for a in range(actions):
                    t = images[combos[:, a], b]
                    ok = has & (t >= 0)
                    reach = reach | np.where(ok, np.left_shift(1, np.maximum(t, 0)), 0)
            if np.array_equal(before, reach):
                break
        rows[:, pre, :] = rows_of[reach]
    flat = rows.reshape(rows.shape[0], -1)
    uniq, first = np.unique(flat, axis=0, return_index=True)
    perms = list(itertools.permutations(range(n)))
    perm_masks = [np.array([sum(1 << p[w] for w in range(n) if b >> w & 1) for b in range(nb)])
                  for p in perms]
    seen = set()
    out = []
    for k in np.argsort(first):
        table = uniq[k].reshape(nb, nb)
        forms = []
        for pm in perm_masks:
            t2 = np.zeros_like(table)
            t2[np.ix_(pm, pm)] = table
            forms.append(t2.tobytes())
        key = min(forms)
        if key in seen:
            continue
        seen.add(key)
        out.append((table, tuple(int(c) for c in combos[first[k]])))
    return tuple(out)


# ---------------------------------------------------------------------------
# Candidate streams per model kind


def _ids(prefix: str, n: int) -> list:
    return [f"{prefix}{k}" for k in range(n)]


def _rel_pairs(worlds, masks) -> list:
    n = len(worlds)
    return [(worlds[w], worlds[v]) for w in range(n) for v in range(n) if masks[w] >> v & 1]


def _val_from(worlds, val: dict) -> dict:
    return {p: [w for k, w in enumerate(worlds) if m >> k & 1] for p, m in val.items()}


def kripke_candidates(n, agent_names, cls, cap):
    worlds = tuple(_ids("w", n))
    index = {w: k for k, w in enumerate(worlds)}
    for codes in canonical_frames(n, len(agent_names), cls, cap):
        succ = {a: code_to_masks(c, n) for a, c in zip(agent_names, codes)}
        st = Structure("kripke", worlds, index, succ=succ)

        def build(val, succ=succ):
            return KripkeModel(worlds, {a: _rel_pairs(worlds, s) for a, s in succ.items()},
                               _val_from(worlds, val), tuple(agent_names))

        yield Candidate(st, (1 << n) - 1, build)


def fo_candidates(n, agent_names, const_names, max_values, cls, cap):
    worlds = tuple(_ids("w", n))
    index = {w: k for k, w in enumerate(worlds)}
    patterns = value_patterns(n, max_values)
    domain = tuple(_ids("v", max_values))
    for codes in canonical_frames(n, len(agent_names), cls, cap):
        succ = {a: code_to_masks(c, n) for a, c in zip(agent_names, codes)}
        for pats in itertools.product(patterns, repeat=len(const_names)):
            values = {c: tuple(sum(1 << w for w in range(n) if pat[w] == d) for d in range(max_values))
                      for c, pat in zip(const_names, pats)}
            st = Structure("fo", worlds, index, succ=succ, values=values,
                           constants=tuple(const_names))

            def build(val, succ=succ, pats=pats):
                base = KripkeModel(worlds, {a: _rel_pairs(worlds, s) for a, s in succ.items()},
                                   _val_from(worlds, val), tuple(agent_names))
                vc = {c: {w: domain[pat[k]] for k, w in enumerate(worlds)}
                      for c, pat in zip(const_names, pats)}
                return FOEpistemicModel(base, vc, domain)

            yield Candidate(st, (1 << n) - 1, build)


def _ternary_structures(n, agent_names, tern_keys, frames, active, conditions, cap):
    worlds = tuple(_ids("w", n))
    index = {w: k for k, w in enumerate(worlds)}
    for codes, points in frames:
        succ = {a: code_to_masks(c, n) for a, c in zip(agent_names, codes)}
        slots = [(key, w) for key in tern_keys for w in range(n) if active(w, codes)]
        choices = [legal_pair_sets(n, succ[key[0]][w], conditions) for key, w in slots]
        total = 1
        for ch in choices:
            total *= len(ch)
        if total > cap:
            raise BudgetTooLarge(f"{total} ternary relations on one frame exceed cap {cap}")
        for pick in itertools.product(*choices):
            tern = {key: [()] * n for key in tern_keys}
            for (key, w), pairs in zip(slots, pick):
                tern[key][w] = pairs
            tern = {k: tuple(v) for k, v in tern.items()}
            consts = tuple(dict.fromkeys(c for _, c in tern_keys))
            st = Structure("ternary", worlds, index, succ=succ, tern=tern, constants=consts)

            def build(val, succ=succ, tern=tern, consts=consts):
                base = KripkeModel(worlds, {a: _rel_pairs(worlds, s) for a, s in succ.items()},
                                   _val_from(worlds, val), tuple(agent_names))
                triples = {key: [(worlds[s], worlds[u], worlds[v])
                                 for s in range(n) for (u, v) in per[s]]
                           for key, per in tern.items()}
                return TernaryModel(base, triples, consts)

            yield Candidate(st, points, build)


def ternary_candidates(n, agent_names, tern_keys, depth, cls, conditions, cap):
    """Ternary structures whose slices satisfy ``conditions``.

    Over arbitrary binary relations only point-generated frames trimmed
    at the formula's modal depth are produced (evaluated at world 0);
    truth at a point only depends on that part of a model.  Other frame
    classes are not closed under trimming, so full frames are used.
    """
    if cls == FrameClass.ARBITRARY:
        rooted = rooted_frames(n, len(agent_names), max(depth, 1), cap)
        frames = [(codes, 1) for codes, _ in rooted]
        dist = {codes: d for codes, d in rooted}
        active = lambda w, codes: dist[codes][w] < depth  # noqa: E731
    else:
        frames = [(codes, (1 << n) - 1)
                  for codes in canonical_frames(n, len(agent_names), cls, cap)]
        active = lambda w, codes: True  # noqa: E731
    yield from _ternary_structures(n, agent_names, tern_keys, frames, active, conditions, cap)


def lts_candidates(n, action_count, cap):
    states = tuple(_ids("w", n))
    index = {w: k for k, w in enumerate(states)}
    names = action_names(action_count)
    for table, codes in kh_tables(n, action_count, cap):
        succ = {a: code_to_masks(c, n) for a, c in zip(names, codes)}
        st = Structure("lts", states, index, succ=succ, kh=table)

        def build(val, succ=succ):
            return LtsModel(states, names, {a: _rel_pairs(states, s) for a, s in succ.items()},
                            _val_from(states, val))

        yield Candidate(st, (1 << n) - 1, build)


def action_names(k: int) -> tuple:
    if k <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:k])
    return tuple(_ids("a", k))
