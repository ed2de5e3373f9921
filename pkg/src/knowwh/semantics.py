"""Truth evaluation for every fragment.

Models are compiled into a :class:`Structure` where world sets are int
bitmasks.  The evaluator computes the extension of a formula as one
bitmask per valuation, stored in a numpy array, so the lab can check a
formula against thousands of valuations of the same frame at once; a
plain model check is the one-valuation case.

Announcements and inspections never build new models here.  Every call
carries an ``alive`` mask (again one per valuation) and the modal clauses
intersect successor sets with it, which is the same as evaluating on the
restricted model.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import syntax as S
from .models import (FOEpistemicModel, LtsModel, ModelError, TernaryModel,
                     UnknownSymbol, require_world)
from .planner import belief_search, kh_table


class FragmentMismatch(ValueError):
    """The formula uses operators the model kind cannot interpret."""


_BOOL = {S.Top, S.Bottom, S.Atom, S.Not, S.And, S.Or, S.Implies, S.Iff}
_MODAL = {S.K, S.Box, S.Dia}
_PAL = {S.Announce, S.DiaAnnounce, S.AnnounceWhether}

SUPPORTED_OPS = {
    "kripke": frozenset(_BOOL | _MODAL | {S.Kw} | _PAL),
    "fo": frozenset(_BOOL | _MODAL | {S.Kw, S.Kv, S.Inspect} | _PAL),
    "ternary": frozenset(_BOOL | _MODAL | {S.Kw, S.DiaC, S.DiaC2, S.BoxC2}),
    "lts": frozenset(_BOOL | {S.Kh}),
}

# Beyond this many worlds masks no longer fit an int64 lane.
_INT64_WORLDS = 62
# LTS models up to this size get a full Kh lookup table.
_KH_TABLE_STATES = 6


@dataclass
class Structure:
    """Index-based view of a model."""

    kind: str
    worlds: tuple
    index: dict
    succ: dict = field(default_factory=dict)          # agent/action -> per-world masks
    val: dict = field(default_factory=dict)           # atom -> mask
    values: dict = field(default_factory=dict)        # const -> per-value masks
    tern: dict = field(default_factory=dict)          # (agent, const) -> per-world pairs
    constants: tuple = ()
    kh: object = None                                 # numpy table or per-pair cache

    @property
    def n(self) -> int:
        return len(self.worlds)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def mask(self, ws) -> int:
        m = 0
        for w in ws:
            m |= 1 << self.index[w]
        return m

    def members(self, mask: int) -> list:
        return [w for k, w in enumerate(self.worlds) if mask >> k & 1]


def compile_model(m) -> Structure:
    """Compile (and cache on the model) the bitmask structure."""
    cached = getattr(m, "_structure", None)
    if cached is not None:
        return cached
    worlds = tuple(m.worlds)
    index = {w: k for k, w in enumerate(worlds)}
    st = Structure(m.kind, worlds, index)

    def masks(pairs):
        out = [0] * len(worlds)
        for u, v in pairs:
            out[index[u]] |= 1 << index[v]
        return tuple(out)

    if isinstance(m, LtsModel):
        st.succ = {a: masks(m.trans[a]) for a in m.actions}
        st.val = {p: st.mask(ws) for p, ws in m.val.items()}
        if len(worlds) <= _KH_TABLE_STATES:
            st.kh = kh_table(len(worlds), [st.succ[a] for a in m.actions])
        else:
            st.kh = {}
    else:
        base = m.base
        st.succ = {a: masks(base.rel[a]) for a in base.agents}
        st.val = {p: st.mask(ws) for p, ws in base.val.items()}
    if isinstance(m, FOEpistemicModel):
        st.constants = m.constants
        for c in m.constants:
            st.values[c] = tuple(st.mask(w for w in worlds if m.vc[c][w] == d) for d in m.domain)
    if isinstance(m, TernaryModel):
        st.constants = m.constants
        for (a, c), triples in m.tern.items():
            per = [[] for _ in worlds]
            for s, u, v in sorted(triples, key=lambda t: tuple(index[x] for x in t)):
                per[index[s]].append((index[u], index[v]))
            st.tern[(a, c)] = tuple(tuple(p) for p in per)
    object.__setattr__(m, "_structure", st)
    return st


def check_supported(kind: str, phi: S.Formula) -> None:
    extra = S.operators(phi) - SUPPORTED_OPS[kind]
    if extra:
        names = ", ".join(sorted(t.__name__ for t in extra))
        raise FragmentMismatch(
            f"{S.fragment(phi).value} formula uses {names}, which a {kind} model cannot interpret")


class Evaluator:
    """Extension computation over a batch of valuations of one structure.

    ``atoms`` maps atom names to arrays of world masks, one entry per
    valuation; missing atoms are false everywhere.
    """

    def __init__(self, st: Structure, atoms: dict, size: int):
        self.st = st
        self.size = size
        self.dtype = np.int64 if st.n <= _INT64_WORLDS else object
        self.atoms = {p: np.asarray(v, dtype=self.dtype) for p, v in atoms.items()}
        self.zero = np.zeros(size, dtype=self.dtype)
        self.full = np.full(size, st.full, dtype=self.dtype)

    @classmethod
    def single(cls, st: Structure) -> "Evaluator":
        return cls(st, {p: [m] for p, m in st.val.items()}, 1)

    # helpers -------------------------------------------------------------
    def _bit(self, cond, w: int):
        if self.dtype is object:
            return np.where(cond, 1 << w, 0).astype(object)
        return cond.astype(np.int64) << w

    def _succ(self, agent: str):
        try:
            return self.st.succ[agent]
        except KeyError:
            raise UnknownSymbol(f"unknown agent {agent!r}") from None

    def _values(self, c: str):
        try:
            return self.st.values[c]
        except KeyError:
            raise UnknownSymbol(f"unknown constant {c!r}") from None

    def _pairs(self, agent: str, c: str):
        if agent not in self.st.succ:
            raise UnknownSymbol(f"unknown agent {agent!r}")
        if c not in self.st.constants:
            raise UnknownSymbol(f"unknown constant {c!r}")
        return self.st.tern.get((agent, c), ((),) * self.st.n)

    # main recursion ------------------------------------------------------
    def ext(self, phi: S.Formula, alive=None):
        if alive is None:
            alive = self.full
        t = type(phi)
        if t is S.Top:
            return alive
        if t is S.Bottom:
            return self.zero
        if t is S.Atom:
            return self.atoms.get(phi.name, self.zero) & alive
        if t is S.Not:
            return alive & ~self.ext(phi.sub, alive)
        if t is S.And:
            return self.ext(phi.left, alive) & self.ext(phi.right, alive)
        if t is S.Or:
            return self.ext(phi.left, alive) | self.ext(phi.right, alive)
        if t is S.Implies:
            return (alive & ~self.ext(phi.left, alive)) | self.ext(phi.right, alive)
        if t is S.Iff:
            a, b = self.ext(phi.left, alive), self.ext(phi.right, alive)
            return alive & ~(a ^ b)
        if t is S.K or t is S.Box:
            return self._all_succ(phi.agent, self.ext(phi.sub, alive), alive)
        if t is S.Dia:
            x = self.ext(phi.sub, alive)
            return alive & ~self._all_succ(phi.agent, alive & ~x, alive)
        if t is S.Kw:
            return self._kw(phi.agent, self.ext(phi.sub, alive), alive)
        if t is S.Kv:
            return self._kv(phi.agent, self.ext(phi.cond, alive), phi.const, alive)
        if t is S.Announce:
            a = self.ext(phi.ann, alive)
            return (alive & ~a) | (self.ext(phi.body, a) & a)
        if t is S.DiaAnnounce:
            a = self.ext(phi.ann, alive)
            return self.ext(phi.body, a) & a
        if t is S.AnnounceWhether:
            a = self.ext(phi.ann, alive)
            b = alive & ~a
            return (self.ext(phi.body, a) & a) | (self.ext(phi.body, b) & b)
        if t is S.Inspect:
            out = self.zero
            for vm in self._values(phi.const):
                part = alive & vm
                out = out | (self.ext(phi.body, part) & part)
            return out
        if t is S.DiaC:
            x = self.ext(phi.sub, alive)
            return self._dia_c(phi.agent, phi.const, x, x, alive)
        if t is S.DiaC2:
            return self._dia_c(phi.agent, phi.const, self.ext(phi.left, alive),
                               self.ext(phi.right, alive), alive)
        if t is S.BoxC2:
            nx = alive & ~self.ext(phi.left, alive)
            ny = alive & ~self.ext(phi.right, alive)
            return alive & ~self._dia_c(phi.agent, phi.const, nx, ny, alive)
        if t is S.Kh:
            return self._kh(self.ext(phi.pre, alive), self.ext(phi.goal, alive), alive)
        raise TypeError(f"not a formula: {phi!r}")

    def _all_succ(self, agent, x, alive):
        """Worlds all of whose live successors lie in ``x``."""
        out = self.zero
        for w, sw in enumerate(self._succ(agent)):
            if sw == 0:
                out = out | (1 << w)
                continue
            out = out | self._bit((sw & alive & ~x) == 0, w)
        return out & alive

    def _kw(self, agent, x, alive):
        out = self.zero
        for w, sw in enumerate(self._succ(agent)):
            if sw & (sw - 1) == 0:          # at most one successor
                out = out | (1 << w)
                continue
            live = sw & alive
            out = out | self._bit(((live & ~x) == 0) | ((live & x) == 0), w)
        return out & alive

    def _kv(self, agent, x, c, alive):
        vals = self._values(c)
        out = self.zero
        for w, sw in enumerate(self._succ(agent)):
            reach = sw & alive & x
            hit = sum(((reach & vm) != 0).astype(np.int64) for vm in vals)
            out = out | self._bit(hit <= 1, w)
        return out & alive

    def _dia_c(self, agent, c, x, y, alive):
        out = self.zero
        for w, pairs in enumerate(self._pairs(agent, c)):
            if not pairs:
                continue
            hit = np.zeros(self.size, dtype=bool)
            for u, v in pairs:
                hit = hit | ((((x >> u) & 1) != 0) & (((y >> v) & 1) != 0) & (((alive >> u) & (alive >> v) & 1) != 0))
            out = out | self._bit(hit, w)
        return out & alive

    def _kh(self, pre, goal, alive):
        table = self.st.kh
        if table is None:
            raise FragmentMismatch("Kh needs a labelled transition system")
        if isinstance(table, np.ndarray):
            holds = table[pre.astype(np.int64), goal.astype(np.int64)]
        else:
            acts = list(self.st.succ.values())
            holds = np.zeros(self.size, dtype=bool)
            for k in range(self.size):
                key = (int(pre[k]), int(goal[k]))
                if key not in table:
                    table[key] = belief_search(self.st.n, acts, *key) is not None
                holds[k] = table[key]
        return np.where(holds, alive, self.zero)


# ---------------------------------------------------------------------------
# Public API


def extension_mask(m, phi: S.Formula) -> int:
    st = compile_model(m)
    check_supported(st.kind, phi)
    return int(Evaluator.single(st).ext(phi)[0])


def truth_set(m, phi: S.Formula) -> set:
    """Set of worlds of ``m`` where ``phi`` holds."""
    st = compile_model(m)
    return set(st.members(extension_mask(m, phi)))


def eval(m, s: str, phi: S.Formula) -> bool:  # noqa: A001 - mirrors the operation name
    """``m, s |= phi`` for any supported model kind."""
    require_world(m, s)
    st = compile_model(m)
    return bool(extension_mask(m, phi) >> st.index[s] & 1)


def _gated(m, s, phi, kinds, ops, what):
    if m.kind not in kinds:
        raise FragmentMismatch(f"{what} evaluation needs a {' or '.join(kinds)} model, got {m.kind}")
    extra = S.operators(phi) - ops
    if extra:
        names = ", ".join(sorted(t.__name__ for t in extra))
        raise FragmentMismatch(f"{names} outside the {what} fragment")
    return eval(m, s, phi)


def eval_el(m, s, phi) -> bool:
    return _gated(m, s, phi, ("kripke", "fo", "ternary"), _BOOL | _MODAL, "EL")


def eval_ncl(m, s, phi) -> bool:
    return _gated(m, s, phi, ("kripke", "fo"), SUPPORTED_OPS["kripke"], "NCL")


def eval_kv(m, s, phi) -> bool:
    return _gated(m, s, phi, ("fo",), SUPPORTED_OPS["fo"], "Kv")


def eval_mlkv(m, s, phi) -> bool:
    return _gated(m, s, phi, ("ternary",), SUPPORTED_OPS["ternary"], "MLKv")


def kd_holds(m: FOEpistemicModel, s: str, agent: str, c: str, d: str) -> bool:
    """Primitive dependence clause: successors of ``s`` that agree on ``c``
    also agree on ``d``."""
    require_world(m, s)
    if not isinstance(m, FOEpistemicModel):
        raise ModelError("dependence needs a first-order model")
    succ = m.base.successors(agent, s)
    for t1 in succ:
        for t2 in succ:
            if m.value(c, t1) == m.value(c, t2) and m.value(d, t1) != m.value(d, t2):
                return False
    return True

