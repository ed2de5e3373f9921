"""Axiom suites: each axiom against its frame class, plus known non-validities."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .. import syntax as S
from ..generate import random_formula
from ..parser import parse
from ..translate import expand_binary_diamond
from .search import ALL_CONDITIONS, SearchBudget, Verdict, model_kind, valid

FT = S.FragmentTag

SPOT_CHECKS = 20
SPOT_DEPTH = 2
# Substitution instances deepen the formula, and over three worlds the
# ternary enumeration grows to tens of thousands of frames per instance.
SPOT_TERNARY_WORLDS = 2

# Expected outcomes.  "either" items only document what the search finds.
VALID, INVALID, EITHER = "valid", "invalid", "either"


@dataclass(frozen=True)
class SuiteItem:
    name: str
    text: str
    cls: str = "arbitrary"
    expect: str = VALID
    schematic: tuple = ("p", "q", "r")
    conditions: tuple = ALL_CONDITIONS
    note: str = ""

    @property
    def formula(self) -> S.Formula:
        return parse(self.text)


@dataclass(frozen=True)
class Suite:
    name: str
    fragment: FT
    items: tuple


def _expansion_item(name: str, conditions: tuple, expect: str, note: str) -> SuiteItem:
    p, q = S.Atom("p"), S.Atom("q")
    text = S.to_text(S.Iff(S.DiaC2("i", "c", p, q), expand_binary_diamond(p, q, "i", "c")))
    return SuiteItem(name, text, expect=expect, schematic=("p", "q"), conditions=conditions, note=note)


_S5 = Suite("s5", FT.EL, (
    SuiteItem("DISTK", "K{i}(p -> q) -> (K{i}p -> K{i}q)", "equivalence"),
    SuiteItem("T", "K{i}p -> p", "equivalence"),
    SuiteItem("4", "K{i}p -> K{i}K{i}p", "equivalence"),
    SuiteItem("5", "~K{i}p -> K{i}~K{i}p", "equivalence"),
))

_SNCL = Suite("sncl-arbitrary", FT.NCL, (
    SuiteItem("KwCon", "Kw{i}(q -> p) & Kw{i}(~q -> p) -> Kw{i}p"),
    SuiteItem("KwDis", "Kw{i}p -> Kw{i}(p -> q) | Kw{i}(~p -> q)"),
    SuiteItem("Kw<->", "Kw{i}p <-> Kw{i}~p"),
    SuiteItem("AD", "~Kw{i}q -> (box{i}p <-> (Kw{i}p & Kw{i}(q -> p)))", note="mixed box/Kw"),
    SuiteItem("Kw-as-box", "Kw{i}p <-> (box{i}p | box{i}~p)", note="translation into ML"),
    SuiteItem("Kw-distribution", "Kw{i}(p -> q) & Kw{i}p -> Kw{i}q", expect=INVALID),
    SuiteItem("box-as-Kw", "box{i}p <-> (p & Kw{i}p)", expect=INVALID,
              note="translation into NCL needs reflexivity"),
))

_TABLE1 = Suite("table1", FT.NCL, (
    SuiteItem("KwT", "Kw{i}p & Kw{i}(p -> q) & p -> Kw{i}q", "reflexive"),
    SuiteItem("Kw4", "Kw{i}p -> Kw{i}(Kw{i}p | q)", "transitive"),
    SuiteItem("Kw5", "~Kw{i}p -> Kw{i}(~Kw{i}p | q)", "euclidean"),
    SuiteItem("wKw4", "Kw{i}p -> Kw{i}Kw{i}p", "reflexive-transitive"),
    SuiteItem("wKw4/transitive", "Kw{i}p -> Kw{i}Kw{i}p", "transitive"),
    SuiteItem("wKw5", "~Kw{i}p -> Kw{i}~Kw{i}p", "equivalence"),
    SuiteItem("wKw5/euclidean", "~Kw{i}p -> Kw{i}~Kw{i}p", "euclidean"),
    SuiteItem("KwB", "p -> Kw{i}((Kw{i}p & Kw{i}(p -> q) & ~Kw{i}q) -> r)", "symmetric"),
    SuiteItem("box-as-Kw/reflexive", "box{i}p <-> (p & Kw{i}p)", "reflexive"),
    SuiteItem("KwT/arbitrary", "Kw{i}p & Kw{i}(p -> q) & p -> Kw{i}q", expect=INVALID),
))

_KW_REDUCTION = Suite("kw-reduction", FT.NCL, (
    SuiteItem("!Kw", "[p]Kw{i}q <-> (p -> (Kw{i}[p]q | Kw{i}[p]~q))"),
    SuiteItem("!ATOM", "[q]p <-> (q -> p)", schematic=("q",)),
    SuiteItem("?whether", "[?q]p <-> ([q]p & [~q]p)", schematic=("p", "q")),
))

_SELKV = Suite("selkv", FT.ELKVR, (
    SuiteItem("DISTKv^r", "K{i}(p -> q) -> (Kv{i}(q,$c) -> Kv{i}(p,$c))", "equivalence"),
    SuiteItem("Kv^r4", "Kv{i}(p,$c) -> K{i}Kv{i}(p,$c)", "equivalence"),
    SuiteItem("Kv^r_bot", "Kv{i}(F,$c)", "equivalence"),
    SuiteItem("Kv^r_or", "~K{i}~(p & q) & Kv{i}(p,$c) & Kv{i}(q,$c) -> Kv{i}(p | q,$c)", "equivalence"),
    SuiteItem("Kv+introspection", "Kv{i}($c) -> K{i}Kv{i}($c)", "equivalence"),
    SuiteItem("Kv-introspection", "~Kv{i}($c) -> K{i}~Kv{i}($c)", "equivalence"),
))

_PALKV = Suite("palkv-reduction", FT.PALKVR, (
    SuiteItem("!ATOM", "<q>p <-> (q & p)", "equivalence", schematic=("q",)),
    SuiteItem("!NEG", "<q>~p <-> (q & ~<q>p)", "equivalence"),
    SuiteItem("!CON", "<q>(p & r) <-> (<q>p & <q>r)", "equivalence"),
    SuiteItem("!K", "<q>K{i}p <-> (q & K{i}(q -> <q>p))", "equivalence"),
    SuiteItem("!Kv^r", "<p>Kv{i}(q,$c) <-> (p & Kv{i}(<p>q,$c))", "equivalence"),
    SuiteItem("Plaza", "<p>Kv{1}($c) & <q>Kv{1}($c) -> <p | q>Kv{1}($c)", "equivalence"),
))

_PILKV = Suite("pilkv", FT.PILKV, (
    SuiteItem("Kd-transfer", "Kd{i}($c,$d) & Kv{i}(p,$c) -> Kv{i}(p,$d)", "equivalence"),
    SuiteItem("inspect-commute", "[$c][$d]p <-> [$d][$c]p"),
    SuiteItem("Kv-Kd", "Kv{i}($c) -> Kd{i}($d,$c)", "equivalence"),
))

_SMLKV = Suite("smlkv", FT.MLKV, (
    SuiteItem("DISTK", "box{i}(p -> q) -> (box{i}p -> box{i}q)"),
    SuiteItem("DISTKv^b", "box{i,$c}(p -> q, r) -> (box{i,$c}(p, r) -> box{i,$c}(q, r))"),
    SuiteItem("SYM", "box{i,$c}(p, q) -> box{i,$c}(q, p)"),
    SuiteItem("INC", "dia{i,$c}(p, q) -> dia{i}p"),
    SuiteItem("ATEUC", "dia{i,$c}(p, q) & dia{i}r -> dia{i,$c}(p, r) | dia{i,$c}(q, r)"),
    SuiteItem("unary-mono", "box{i}(p -> q) -> (dia{i,$c}p -> dia{i,$c}q)"),
    SuiteItem("unary-bot", "~dia{i,$c}F"),
    SuiteItem("unary-split", "dia{i}(p & q) & dia{i,$c}(p | q) -> (dia{i,$c}p | dia{i,$c}q)"),
    SuiteItem("unary-box-mono", "box{i}(p -> q) -> (box{i,$c}p -> box{i,$c}q)"),
    _expansion_item("expansion", ALL_CONDITIONS, VALID, "three-disjunct expansion"),
    SuiteItem("unary-box-distribution", "box{i,$c}(p -> q) -> (box{i,$c}p -> box{i,$c}q)",
              expect=INVALID),
    _expansion_item("expansion/no-anti-euclidean", ("symmetry", "inclusion"), EITHER,
                    "expansion with the anti-Euclidean condition dropped"),
))

_SKH = Suite("skh", FT.LKH, (
    SuiteItem("TAUT", "p -> (q -> p)"),
    SuiteItem("DISTU", "U p & U(p -> q) -> U q"),
    SuiteItem("COMPKh", "Kh(p, r) & Kh(r, q) -> Kh(p, q)"),
    SuiteItem("EMP", "U(p -> q) -> Kh(p, q)"),
    SuiteItem("TU", "U p -> p"),
    SuiteItem("4KU", "Kh(p, q) -> U Kh(p, q)"),
    SuiteItem("5KU", "~Kh(p, q) -> U ~Kh(p, q)"),
    SuiteItem("WSKh", "U(p -> r) & U(o -> q) & Kh(r, o) -> Kh(p, q)", schematic=("p", "q", "r", "o")),
    SuiteItem("POSTKh", "Kh(r, Kh(p, q) & p) -> Kh(r, q)"),
    SuiteItem("U4", "U p -> U U p", note="universal modality is S5"),
    SuiteItem("U5", "~U p -> U ~U p", note="universal modality is S5"),
))

SUITES = {s.name: s for s in (_S5, _SNCL, _TABLE1, _KW_REDUCTION, _SELKV, _PALKV, _PILKV, _SMLKV, _SKH)}

# The suites whose every expected-valid item is a soundness claim.
SOUNDNESS_SUITES = ("s5", "sncl-arbitrary", "table1", "kw-reduction", "selkv", "palkv-reduction",
                    "smlkv", "skh")


@dataclass
class ItemReport:
    suite: str
    item: str
    formula: str
    frame_class: str
    expected: str
    verdict: Verdict
    spot_checks: int = 0
    spot_failure: Optional[str] = None

    @property
    def status(self) -> str:
        return self.verdict.status

    @property
    def ok(self) -> bool:
        if self.spot_failure is not None:
            return False
        return self.expected == EITHER or self.expected == self.status

    def line(self) -> str:
        mark = "ok" if self.ok else "FAIL"
        text = f"{self.suite:16} {self.item:28} {self.frame_class:21} {self.status:8} {mark}"
        if self.verdict.model is not None:
            text += f"  countermodel at {self.verdict.world} ({len(self.verdict.model.worlds)} worlds)"
        if self.spot_checks:
            text += f"  spot {self.spot_checks}/{SPOT_CHECKS}"
        if self.spot_failure:
            text += f"  spot failure: {self.spot_failure}"
        return text

    def to_dict(self) -> dict:
        d = {"suite": self.suite, "item": self.item, "formula": self.formula,
             "frame_class": self.frame_class, "expected": self.expected,
             "status": self.status, "ok": self.ok, "examined": self.verdict.examined}
        if self.verdict.model is not None:
            d["countermodel"] = self.verdict.model.to_dict()
            d["world"] = self.verdict.world
        if self.spot_checks:
            d["spot_checks"] = self.spot_checks
        if self.spot_failure:
            d["spot_failure"] = self.spot_failure
        return d


@dataclass
class SuiteReport:
    name: str
    items: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.items)

    @property
    def failures(self) -> list:
        return [r for r in self.items if not r.ok]

    def text(self) -> str:
        lines = [r.line() for r in self.items]
        passed = sum(r.ok for r in self.items)
        lines.append(f"{self.name}: {passed}/{len(self.items)} as expected")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps([r.to_dict() for r in self.items], indent=2)


def _letters(budget: SearchBudget) -> tuple:
    base = ("p", "q", "r", "o", "s", "t")
    if budget.max_letters <= len(base):
        return base[:budget.max_letters]
    return base + tuple(f"p{k}" for k in range(budget.max_letters - len(base)))


def spot_check(suite: Suite, item: SuiteItem, budget: SearchBudget,
               count: int = SPOT_CHECKS) -> tuple[int, Optional[str]]:
    """Validity of ``count`` random substitution instances of an item.

    Returns the number checked and the first failing instance, if any.
    The generator is seeded by the suite and item names.
    """
    rng = random.Random(f"{suite.name}:{item.name}")
    phi = item.formula
    schematic = [p for p in item.schematic if p in S.atoms(phi)]
    if not schematic:
        return 0, None
    agents = tuple(S.agents(phi)) or ("i",)
    consts = tuple(S.constants(phi)) or ("c",)
    letters = _letters(budget)
    small = replace(budget, max_worlds=min(budget.max_worlds, SPOT_TERNARY_WORLDS))
    for _ in range(count):
        mapping = {p: random_formula(rng, suite.fragment, SPOT_DEPTH, letters, agents, consts)
                   for p in schematic}
        inst = S.subst_many(phi, mapping)
        b = small if model_kind(inst) == "ternary" else budget
        v = valid(inst, item.cls, b, conditions=item.conditions)
        if not v.valid:
            return count, S.to_text(inst)
    return count, None


def run_item(suite: Suite, item: SuiteItem, budget: SearchBudget, spot: bool = True) -> ItemReport:
    v = valid(item.formula, item.cls, budget, conditions=item.conditions)
    report = ItemReport(suite.name, item.name, item.text, v.frame_class, item.expect, v)
    if spot and item.expect == VALID and v.valid:
        report.spot_checks, report.spot_failure = spot_check(suite, item, budget)
    return report


def run_suite(name: str, budget: SearchBudget = SearchBudget(), spot: bool = True) -> SuiteReport:
    """Check every item of suite ``name`` and collect per-item verdicts."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    suite = SUITES[name]
    report = SuiteReport(name)
    for item in suite.items:
        report.items.append(run_item(suite, item, budget, spot))
    return report
