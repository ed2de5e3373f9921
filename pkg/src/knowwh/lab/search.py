"""Validity, frame validity and satisfiability by exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import syntax as S
from ..models import FrameClass, model_to_json
from ..semantics import Evaluator, check_supported, compile_model, eval as eval_at
from . import enumeration as E
from .enumeration import BudgetTooLarge

ALL_CONDITIONS = ("symmetry", "inclusion", "anti-euclidean")

# Valuation batches larger than this are refused.
MAX_VALUATIONS = 1 << 16


@dataclass(frozen=True)
class SearchBudget:
    max_worlds: int = 3
    max_agents: int = 1
    max_values: int = 2
    max_actions: int = 2
    max_letters: int = 2
    cap: int = 2_000_000

    def __post_init__(self):
        for name in ("max_worlds", "max_agents", "max_values", "max_actions", "max_letters", "cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass
class Verdict:
    """Outcome of a search.

    ``status`` is one of ``valid`` (up to budget), ``invalid``,
    ``satisfiable`` or ``unsat`` (up to budget).  Negative outcomes for
    validity and positive ones for satisfiability carry a model and world.
    """

    status: str
    formula: str
    kind: str
    frame_class: str
    examined: int = 0
    structures: int = 0
    model: object = None
    world: Optional[str] = None
    effective: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    @property
    def countermodel_json(self) -> Optional[str]:
        return None if self.model is None else model_to_json(self.model)

    def to_dict(self) -> dict:
        d = {"status": self.status, "formula": self.formula, "kind": self.kind,
             "frame_class": self.frame_class, "examined": self.examined,
             "structures": self.structures, "effective": self.effective}
        if self.model is not None:
            d["model"] = self.model.to_dict()
            d["world"] = self.world
        return d

    def summary(self) -> str:
        if self.status == "valid":
            return f"valid up to budget ({self.examined} models over {self.structures} frames)"
        if self.status == "unsat":
            return f"unsatisfiable up to budget ({self.examined} models over {self.structures} frames)"
        return f"{self.status} at {self.world}"


def model_kind(phi: S.Formula) -> str:
    ops = S.operators(phi)
    if S.Kh in ops:
        return "lts"
    if ops & {S.DiaC, S.DiaC2, S.BoxC2}:
        return "ternary"
    if ops & {S.Kv, S.Inspect}:
        return "fo"
    return "kripke"


def valuation_arrays(n: int, letters) -> tuple[dict, int]:
    """Every valuation of ``letters`` over ``n`` worlds, one per index."""
    k = len(letters)
    size = 1 << (n * k)
    if size > MAX_VALUATIONS:
        raise BudgetTooLarge(f"{size} valuations of {k} letters over {n} worlds exceed {MAX_VALUATIONS}")
    idx = np.arange(size, dtype=np.int64)
    full = (1 << n) - 1
    return {p: (idx >> (j * n)) & full for j, p in enumerate(letters)}, size


def _valuation_at(arrays: dict, k: int) -> dict:
    return {p: int(a[k]) for p, a in arrays.items()}


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _candidates(phi, kind, cls, budget: SearchBudget, n: int, conditions):
    agents = S.agents(phi) or ["i"]
    if kind == "kripke":
        return E.kripke_candidates(n, agents, cls, budget.cap)
    if kind == "fo":
        return E.fo_candidates(n, agents, S.constants(phi), budget.max_values, cls, budget.cap)
    if kind == "ternary":
        keys = tuple(dict.fromkeys((f.agent, f.const) for f in S.subformulas(phi)
                                   if isinstance(f, (S.DiaC, S.DiaC2, S.BoxC2))))
        return E.ternary_candidates(n, agents, keys, S.modal_depth(phi), cls, conditions, budget.cap)
    if cls != FrameClass.ARBITRARY:
        raise ValueError("transition systems have no frame classes")
    return E.lts_candidates(n, budget.max_actions, budget.cap)


def _search(phi, cls, budget, kind, conditions, want_sat: bool):
    cls = FrameClass.parse(cls)
    kind = kind or model_kind(phi)
    check_supported(kind, phi)
    letters = S.atoms(phi)
    examined = structures = 0
    effective = {"worlds": budget.max_worlds, "letters": len(letters),
                 "agents": len(S.agents(phi)), "values": budget.max_values,
                 "actions": budget.max_actions if kind == "lts" else 0}
    if kind == "ternary":
        effective["conditions"] = list(conditions)
    for n in range(1, budget.max_worlds + 1):
        arrays, size = valuation_arrays(n, letters)
        for cand in _candidates(phi, kind, cls, budget, n, conditions):
            ev = Evaluator(cand.st, arrays, size)
            ext = ev.ext(phi)
            structures += 1
            examined += size
            if want_sat:
                hits = np.nonzero(ext & cand.points)[0]
            else:
                hits = np.nonzero((ext & cand.points) != cand.points)[0]
            if hits.size:
                k = int(hits[0])
                val = _valuation_at(arrays, k)
                bits = int(ext[k]) & cand.points if want_sat else cand.points & ~int(ext[k])
                model = cand.build(val)
                world = model.worlds[_lowest(bits)]
                # Replay on the materialised model through the ordinary evaluator.
                if eval_at(model, world, phi) != want_sat:
                    raise RuntimeError(f"witness for {S.to_text(phi)} does not replay")
                status = "satisfiable" if want_sat else "invalid"
                return Verdict(status, S.to_text(phi), kind, cls.value, examined, structures,
                               model, world, effective)
    status = "unsat" if want_sat else "valid"
    return Verdict(status, S.to_text(phi), kind, cls.value, examined, structures, None, None, effective)


def valid(phi: S.Formula, cls=FrameClass.ARBITRARY, budget: SearchBudget = SearchBudget(),
          kind: Optional[str] = None, conditions=ALL_CONDITIONS) -> Verdict:
    """Check ``phi`` at every world of every model within the budget.

    The model kind follows from the operators of ``phi``.  Every atom of
    ``phi`` is given all valuations regardless of ``max_letters``.
    """
    return _search(phi, cls, budget, kind, tuple(conditions), want_sat=False)


def sat_search(phi: S.Formula, budget: SearchBudget = SearchBudget(), cls=FrameClass.ARBITRARY,
               kind: Optional[str] = None, conditions=ALL_CONDITIONS) -> Verdict:
    """First satisfying pointed model in enumeration order: by number of
    worlds, then canonical frame code, then valuation index."""
    return _search(phi, cls, budget, kind, tuple(conditions), want_sat=True)


def frame_valid(frame, phi: S.Formula) -> Verdict:
    """Truth of ``phi`` at every world of ``frame`` under every valuation
    of its letters; the frame's own valuation is ignored."""
    st = compile_model(frame)
    check_supported(st.kind, phi)
    letters = S.atoms(phi)
    arrays, size = valuation_arrays(st.n, letters)
    ev = Evaluator(st, arrays, size)
    ext = ev.ext(phi)
    bad = np.nonzero(ext != st.full)[0]
    effective = {"worlds": st.n, "letters": len(letters)}
    if bad.size:
        k = int(bad[0])
        val = _valuation_at(arrays, k)
        model = _with_valuation(frame, {p: st.members(m) for p, m in val.items()})
        world = st.worlds[_lowest(st.full & ~int(ext[k]))]
        return Verdict("invalid", S.to_text(phi), st.kind, "frame", size, 1, model, world, effective)
    return Verdict("valid", S.to_text(phi), st.kind, "frame", size, 1, None, None, effective)


def _with_valuation(m, val: dict):
    from ..models import FOEpistemicModel, KripkeModel, LtsModel, TernaryModel

    if isinstance(m, LtsModel):
        return LtsModel(m.states, m.actions, m.trans, val)
    base = KripkeModel(m.base.worlds, m.base.rel, val, m.base.agents)
    if isinstance(m, KripkeModel):
        return base
    if isinstance(m, FOEpistemicModel):
        return FOEpistemicModel(base, m.vc, m.domain)
    return TernaryModel(base, m.tern, m.constants)


__all__ = ["SearchBudget", "Verdict", "BudgetTooLarge", "valid", "sat_search", "frame_valid",
           "model_kind", "valuation_arrays"]
