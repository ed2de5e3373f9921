"""Seeded random formulas and models for property tests and spot checks."""

from __future__ import annotations

import itertools
import random

from . import syntax as S
from .models import (FOEpistemicModel, FrameClass, KripkeModel, LtsModel, TernaryModel,
                     check_ternary_conditions, derive_ternary, masks_in_class)

FT = S.FragmentTag

# Constructors available in each fragment, beyond the boolean ones.
_MODAL_BUILDERS = {
    FT.EL: ("K", "Box", "Dia"),
    FT.NCL: ("Kw", "Announce", "DiaAnnounce", "AnnounceWhether"),
    FT.ELKVR: ("K", "Kv"),
    FT.PALKVR: ("K", "Kv", "Announce", "DiaAnnounce"),
    FT.PILKV: ("K", "Kv", "Inspect"),
    FT.MLKV: ("Box", "Dia", "DiaC", "DiaC2", "BoxC2"),
    FT.LKH: ("Kh",),
}


def random_formula(rng: random.Random, frag: FT, depth: int, atoms=("p", "q"),
                   agents=("i",), consts=("c",)) -> S.Formula:
    """Random formula of the given fragment with nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return S.TOP
        if r < 0.14:
            return S.BOTTOM
        return S.Atom(rng.choice(atoms))
    sub = lambda: random_formula(rng, frag, depth - 1, atoms, agents, consts)  # noqa: E731
    choices = ["Not", "And", "Or", "Implies", "Iff"] + list(_MODAL_BUILDERS[frag]) * 2
    kind = rng.choice(choices)
    agent = rng.choice(agents)
    const = rng.choice(consts)
    if kind == "Not":
        return S.Not(sub())
    if kind in ("And", "Or", "Implies", "Iff"):
        return getattr(S, kind)(sub(), sub())
    if kind in ("K", "Box", "Dia", "Kw"):
        return getattr(S, kind)(agent, sub())
    if kind == "Kv":
        return S.Kv(agent, sub() if rng.random() < 0.7 else S.TOP, const)
    if kind in ("Announce", "DiaAnnounce", "AnnounceWhether"):
        return getattr(S, kind)(sub(), sub())
    if kind == "Inspect":
        return S.Inspect(const, sub())
    if kind == "DiaC":
        return S.DiaC(agent, const, sub())
    if kind in ("DiaC2", "BoxC2"):
        return getattr(S, kind)(agent, const, sub(), sub())
    if kind == "Kh":
        return S.Kh(sub(), sub())
    raise AssertionError(kind)


def _ids(prefix: str, n: int) -> list:
    return [f"{prefix}{k}" for k in range(n)]


def random_relation(rng: random.Random, n: int, cls=FrameClass.ARBITRARY, density: float = 0.4):
    """Per-world successor masks of a random relation in ``cls``."""
    cls = FrameClass.parse(cls)
    full = (1 << n) - 1
    if cls == FrameClass.EQUIVALENCE:
        labels = [rng.randrange(n) for _ in range(n)]
        return tuple(sum(1 << v for v in range(n) if labels[v] == labels[w]) for w in range(n))
    for _ in range(200):
        succ = [sum(1 << v for v in range(n) if rng.random() < density) for _ in range(n)]
        if cls in (FrameClass.REFLEXIVE, FrameClass.REFLEXIVE_TRANSITIVE):
            succ = [s | 1 << w for w, s in enumerate(succ)]
        if cls == FrameClass.SERIAL:
            succ = [s or 1 << rng.randrange(n) for s in succ]
        if cls == FrameClass.SYMMETRIC:
            for w in range(n):
                for v in range(n):
                    if succ[w] >> v & 1:
                        succ[v] |= 1 << w
        if cls in (FrameClass.TRANSITIVE, FrameClass.REFLEXIVE_TRANSITIVE):
            changed = True
            while changed:
                changed = False
                for w in range(n):
                    for v in range(n):
                        if succ[w] >> v & 1 and succ[v] & ~succ[w] & full:
                            succ[w] |= succ[v]
                            changed = True
        succ = tuple(succ)
        if masks_in_class(n, succ, cls):
            return succ
    # Euclidean rejection sampling can fail; equivalence relations are Euclidean.
    return random_relation(rng, n, FrameClass.EQUIVALENCE)


def random_kripke(rng: random.Random, n: int, agents=("i",), atoms=("p", "q"),
                  cls=FrameClass.ARBITRARY, density: float = 0.4) -> KripkeModel:
    worlds = _ids("w", n)
    rel = {}
    for a in agents:
        succ = random_relation(rng, n, cls, density)
        rel[a] = [(worlds[w], worlds[v]) for w in range(n) for v in range(n) if succ[w] >> v & 1]
    val = {p: [w for w in worlds if rng.random() < 0.5] for p in atoms}
    return KripkeModel(worlds, rel, val, tuple(agents))


def random_fo(rng: random.Random, n: int, agents=("i",), atoms=("p", "q"), consts=("c",),
              values: int = 2, cls=FrameClass.ARBITRARY) -> FOEpistemicModel:
    base = random_kripke(rng, n, agents, atoms, cls)
    domain = _ids("v", values)
    vc = {c: {w: rng.choice(domain) for w in base.worlds} for c in consts}
    return FOEpistemicModel(base, vc, domain)


def random_ternary(rng: random.Random, n: int, agents=("i",), atoms=("p", "q"), consts=("c",),
                   conditions=("symmetry", "inclusion", "anti-euclidean")) -> TernaryModel:
    """Random ternary model satisfying the given frame conditions.

    Triples are drawn freely inside the binary relation, closed under
    swapping when symmetry is required, and resampled until the
    anti-Euclidean condition holds.  Half the draws start from a derived
    relation instead, so models with many triples also appear.
    """
    base = random_kripke(rng, n, agents, atoms)
    if rng.random() < 0.5:
        fo = FOEpistemicModel(base, {c: {w: rng.choice("ab") for w in base.worlds} for c in consts},
                              ("a", "b"))
        return derive_ternary(fo)
    for _ in range(100):
        tern = {}
        for a in agents:
            for c in consts:
                triples = set()
                for s in base.worlds:
                    succ = base.successors(a, s)
                    for u, v in itertools.product(succ, succ):
                        if rng.random() < 0.35:
                            triples.add((s, u, v))
                            if "symmetry" in conditions:
                                triples.add((s, v, u))
                tern[(a, c)] = triples
        m = TernaryModel(base, tern, tuple(consts))
        if not check_ternary_conditions(m, conditions):
            return m
    return TernaryModel(base, {(a, c): () for a in agents for c in consts}, tuple(consts))


def random_lts(rng: random.Random, n: int, actions=("a", "b"), atoms=("p", "q"),
               density: float = 0.3) -> LtsModel:
    states = _ids("w", n)
    trans = {a: [(u, v) for u in states for v in states if rng.random() < density] for a in actions}
    val = {p: [s for s in states if rng.random() < 0.5] for p in atoms}
    return LtsModel(states, actions, trans, val)
