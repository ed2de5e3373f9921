"""Finite model types, frame properties, and model updates.

All models are immutable.  Worlds (and LTS states) are strings kept in
declaration order; relations are frozensets of tuples of world ids.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Union

import jsonschema


class ModelError(ValueError):
    """A model violates one of its structural invariants."""


class EmptyResult(ModelError):
    """An update would leave no worlds."""


class UnknownSymbol(ModelError):
    """A world, agent, constant or action is not declared in the model."""


class FrameClass(enum.Enum):
    ARBITRARY = "arbitrary"
    SERIAL = "serial"
    REFLEXIVE = "reflexive"
    TRANSITIVE = "transitive"
    SYMMETRIC = "symmetric"
    EUCLIDEAN = "euclidean"
    EQUIVALENCE = "equivalence"
    REFLEXIVE_TRANSITIVE = "reflexive-transitive"

    @classmethod
    def parse(cls, name: Union[str, "FrameClass"]) -> "FrameClass":
        if isinstance(name, FrameClass):
            return name
        key = name.strip().lower().replace("_", "-")
        aliases = {"s5": "equivalence", "s4": "reflexive-transitive",
                   "k": "arbitrary", "all": "arbitrary", "refl-trans": "reflexive-transitive"}
        key = aliases.get(key, key)
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown frame class {name!r}")


def _freeze_rel(rel) -> dict:
    return {a: frozenset(tuple(p) for p in pairs) for a, pairs in rel.items()}


def _freeze_val(val) -> dict:
    return {p: frozenset(ws) for p, ws in val.items()}


@dataclass(frozen=True)
class KripkeModel:
    worlds: tuple
    rel: Mapping[str, frozenset] = field(default_factory=dict)
    val: Mapping[str, frozenset] = field(default_factory=dict)
    agents: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "rel", _freeze_rel(self.rel))
        object.__setattr__(self, "val", _freeze_val(self.val))
        agents = tuple(self.agents) or tuple(self.rel)
        for a in self.rel:
            if a not in agents:
                agents += (a,)
        object.__setattr__(self, "agents", agents)
        for a in agents:
            self.rel.setdefault(a, frozenset())
        if not self.worlds:
            raise ModelError("model must be non-empty")
        ws = set(self.worlds)
        if len(ws) != len(self.worlds):
            raise ModelError("duplicate world id")
        for a, pairs in self.rel.items():
            for pair in pairs:
                if len(pair) != 2 or not set(pair) <= ws:
                    raise ModelError(f"relation {a!r} uses undeclared world in {pair!r}")
        for p, members in self.val.items():
            if not members <= ws:
                raise ModelError(f"valuation of {p!r} uses undeclared worlds "
                                 f"{sorted(members - ws)}")

    kind = "kripke"

    @property
    def base(self) -> "KripkeModel":
        return self

    def successors(self, agent: str, w: str) -> list:
        if agent not in self.rel:
            raise UnknownSymbol(f"unknown agent {agent!r}")
        return [v for v in self.worlds if (w, v) in self.rel[agent]]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "worlds": list(self.worlds),
            "agents": list(self.agents),
            "rel": {a: _sorted_tuples(self.rel[a], self.worlds) for a in self.agents},
            "val": {p: [w for w in self.worlds if w in ws] for p, ws in sorted(self.val.items())},
        }


@dataclass(frozen=True)
class FOEpistemicModel:
    """Kripke model with a constant domain and a value for each constant
    at each world."""

    base: KripkeModel
    vc: Mapping[str, Mapping[str, str]] = field(default_factory=dict)
    domain: tuple = ()

    kind = "fo"

    def __post_init__(self):
        vc = {c: dict(m) for c, m in self.vc.items()}
        object.__setattr__(self, "vc", vc)
        domain = tuple(self.domain)
        if not domain:
            seen: dict = {}
            for c in vc:
                for w in self.base.worlds:
                    if w in vc[c]:
                        seen.setdefault(vc[c][w])
            domain = tuple(seen) or ("v0",)
        object.__setattr__(self, "domain", domain)
        dset = set(domain)
        for c, m in vc.items():
            missing = [w for w in self.base.worlds if w not in m]
            if missing:
                raise ModelError(f"constant {c!r} has no value at {missing}")
            extra = set(m) - set(self.base.worlds)
            if extra:
                raise ModelError(f"constant {c!r} assigned at undeclared worlds {sorted(extra)}")
            bad = {v for v in m.values() if v not in dset}
            if bad:
                raise ModelError(f"constant {c!r} takes values outside the domain: {sorted(bad)}")

    @property
    def worlds(self):
        return self.base.worlds

    @property
    def agents(self):
        return self.base.agents

    @property
    def constants(self):
        return tuple(self.vc)

    def value(self, c: str, w: str) -> str:
        if c not in self.vc:
            raise UnknownSymbol(f"unknown constant {c!r}")
        return self.vc[c][w]

    def to_dict(self) -> dict:
        d = self.base.to_dict()
        d["kind"] = self.kind
        d["domain"] = list(self.domain)
        d["vc"] = {c: {w: self.vc[c][w] for w in self.worlds} for c in self.vc}
        return d


@dataclass(frozen=True)
class TernaryModel:
    """Kripke model with a ternary relation for each (agent, constant)."""

    base: KripkeModel
    tern: Mapping[tuple, frozenset] = field(default_factory=dict)
    constants: tuple = ()

    kind = "ternary"

    def __post_init__(self):
        tern = {tuple(k): frozenset(tuple(t) for t in v) for k, v in self.tern.items()}
        object.__setattr__(self, "tern", tern)
        consts = list(self.constants)
        for _, c in tern:
            if c not in consts:
                consts.append(c)
        object.__setattr__(self, "constants", tuple(consts))
        ws = set(self.base.worlds)
        for (a, c), triples in tern.items():
            if a not in self.base.agents:
                raise ModelError(f"ternary relation for undeclared agent {a!r}")
            for t in triples:
                if len(t) != 3 or not set(t) <= ws:
                    raise ModelError(f"ternary relation ({a},{c}) uses undeclared world in {t!r}")

    @property
    def worlds(self):
        return self.base.worlds

    @property
    def agents(self):
        return self.base.agents

    def triples(self, agent: str, const: str) -> frozenset:
        if agent not in self.base.agents:
            raise UnknownSymbol(f"unknown agent {agent!r}")
        if const not in self.constants:
            raise UnknownSymbol(f"unknown constant {const!r}")
        return self.tern.get((agent, const), frozenset())

    def to_dict(self) -> dict:
        d = self.base.to_dict()
        d["kind"] = self.kind
        order = {w: k for k, w in enumerate(self.worlds)}
        d["tern"] = {f"{a},{c}": [list(t) for t in sorted(ts, key=lambda t: [order[x] for x in t])]
                     for (a, c), ts in self.tern.items()}
        return d


@dataclass(frozen=True)
class LtsModel:
    """Single-agent labelled transition system for knowing-how."""

    states: tuple
    actions: tuple = ()
    trans: Mapping[str, frozenset] = field(default_factory=dict)
    val: Mapping[str, frozenset] = field(default_factory=dict)

    kind = "lts"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        trans = _freeze_rel(self.trans)
        actions = tuple(self.actions) or tuple(sorted(trans))
        for a in trans:
            if a not in actions:
                raise ModelError(f"transition label {a!r} is not a declared action")
        for a in actions:
            trans.setdefault(a, frozenset())
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "val", _freeze_val(self.val))
        if not self.states:
            raise ModelError("model must be non-empty")
        ss = set(self.states)
        if len(ss) != len(self.states):
            raise ModelError("duplicate state id")
        for a, pairs in trans.items():
            for pair in pairs:
                if len(pair) != 2 or not set(pair) <= ss:
                    raise ModelError(f"transition {a!r} to or from undeclared state in {pair!r}")
        for p, members in self.val.items():
            if not members <= ss:
                raise ModelError(f"valuation of {p!r} uses undeclared states")

    @property
    def worlds(self):
        return self.states

    def successors(self, action: str, s: str) -> list:
        if action not in self.trans:
            raise UnknownSymbol(f"unknown action {action!r}")
        return [t for t in self.states if (s, t) in self.trans[action]]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "worlds": list(self.states),
            "actions": list(self.actions),
            "trans": {a: _sorted_tuples(self.trans[a], self.states) for a in self.actions},
            "val": {p: [s for s in self.states if s in ss] for p, ss in sorted(self.val.items())},
        }


Model = Union[KripkeModel, FOEpistemicModel, TernaryModel, LtsModel]


def _sorted_tuples(pairs, order) -> list:
    idx = {w: k for k, w in enumerate(order)}
    return [list(p) for p in sorted(pairs, key=lambda p: [idx[x] for x in p])]


def require_world(m, w: str) -> None:
    if w not in m.worlds:
        raise UnknownSymbol(f"unknown world {w!r}")


# ---------------------------------------------------------------------------
# JSON format

_PAIRS = {"type": "object", "additionalProperties": {
    "type": "array", "items": {"type": "array", "items": {"type": "string"},
                               "minItems": 2, "maxItems": 2}}}
_VAL = {"type": "object", "additionalProperties": {"type": "array", "items": {"type": "string"}}}
_IDS = {"type": "array", "items": {"type": "string"}}

_KRIPKE_PROPS = {
    "kind": {"enum": ["kripke", "fo", "ternary", "lts"]},
    "worlds": _IDS,
    "agents": _IDS,
    "rel": _PAIRS,
    "val": _VAL,
}

MODEL_SCHEMAS = {
    "kripke": {"type": "object", "required": ["kind", "worlds"],
               "properties": _KRIPKE_PROPS, "additionalProperties": False},
    "fo": {"type": "object", "required": ["kind", "worlds", "vc"],
           "properties": {**_KRIPKE_PROPS, "domain": _IDS, "vc": {
               "type": "object", "additionalProperties": {
                   "type": "object", "additionalProperties": {"type": "string"}}}},
           "additionalProperties": False},
    "ternary": {"type": "object", "required": ["kind", "worlds", "tern"],
                "properties": {**_KRIPKE_PROPS, "constants": _IDS, "derived": {"type": "boolean"},
                               "tern": {"type": "object", "additionalProperties": {
                                   "type": "array", "items": {
                                       "type": "array", "items": {"type": "string"},
                                       "minItems": 3, "maxItems": 3}}}},
                "additionalProperties": False},
    "lts": {"type": "object", "required": ["kind", "worlds"],
            "properties": {"kind": _KRIPKE_PROPS["kind"], "worlds": _IDS, "actions": _IDS,
                           "trans": _PAIRS, "val": _VAL},
            "additionalProperties": False},
}


def model_from_dict(d: dict) -> Model:
    """Build a model from the JSON-decoded form, validating schema and
    invariants.  Ternary models marked ``"derived": true`` must also
    satisfy the three frame conditions."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ModelError("schema error: model must be an object with a 'kind' key")
    kind = d["kind"]
    if kind not in MODEL_SCHEMAS:
        raise ModelError(f"schema error: unknown model kind {kind!r}")
    try:
        jsonschema.validate(d, MODEL_SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ModelError(f"schema error at {where}: {exc.message}") from None
    if not d["worlds"]:
        raise ModelError("model must be non-empty")
    if kind == "lts":
        return LtsModel(d["worlds"], d.get("actions", ()), d.get("trans", {}), d.get("val", {}))
    base = KripkeModel(d["worlds"], d.get("rel", {}), d.get("val", {}), d.get("agents", ()))
    if kind == "kripke":
        return base
    if kind == "fo":
        return FOEpistemicModel(base, d["vc"], d.get("domain", ()))
    tern = {}
    for key, triples in d["tern"].items():
        parts = key.split(",")
        if len(parts) != 2:
            raise ModelError(f"schema error: ternary key {key!r} must be 'agent,constant'")
        tern[(parts[0].strip(), parts[1].strip().lstrip("$"))] = triples
    m = TernaryModel(base, tern, d.get("constants", ()))
    if d.get("derived"):
        violations = check_ternary_conditions(m)
        if violations:
            v = violations[0]
            raise ModelError(f"invariant violation: {v.condition} fails for "
                             f"({v.agent},{v.const}) at {v.witness}")
    return m


def model_from_json(text: str) -> Model:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"schema error: invalid JSON ({exc})") from None
    return model_from_dict(d)


def model_to_json(m: Model) -> str:
    return json.dumps(m.to_dict(), indent=2)


def load_model(path) -> Model:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read())


# ---------------------------------------------------------------------------
# Frame classes


def _rel_in_class(worlds, pairs, cls: FrameClass) -> bool:
    succ = {w: {v for (u, v) in pairs if u == w} for w in worlds}
    refl = all(w in succ[w] for w in worlds)
    if cls == FrameClass.ARBITRARY:
        return True
    if cls == FrameClass.SERIAL:
        return all(succ[w] for w in worlds)
    if cls == FrameClass.REFLEXIVE:
        return refl
    sym = all(u in succ[v] for u in worlds for v in succ[u])
    trans = all(succ[v] <= succ[u] for u in worlds for v in succ[u])
    eucl = all(succ[u] <= succ[v] for u in worlds for v in succ[u])
    return {
        FrameClass.TRANSITIVE: trans,
        FrameClass.SYMMETRIC: sym,
        FrameClass.EUCLIDEAN: eucl,
        FrameClass.EQUIVALENCE: refl and sym and trans,
        FrameClass.REFLEXIVE_TRANSITIVE: refl and trans,
    }[cls]


def check_frame(m, cls) -> bool:
    """True iff every agent's relation belongs to the frame class."""
    cls = FrameClass.parse(cls)
    base = m.base
    return all(_rel_in_class(base.worlds, base.rel[a], cls) for a in base.agents)


def masks_in_class(n: int, succ: tuple, cls: FrameClass) -> bool:
    """Frame-class test on a relation given as per-world successor bitmasks."""
    if cls == FrameClass.ARBITRARY:
        return True
    full = (1 << n) - 1
    refl = all(succ[w] >> w & 1 for w in range(n))
    if cls == FrameClass.SERIAL:
        return all(succ)
    if cls == FrameClass.REFLEXIVE:
        return refl

    def members(mask):
        return [v for v in range(n) if mask >> v & 1]

    if cls in (FrameClass.TRANSITIVE, FrameClass.REFLEXIVE_TRANSITIVE, FrameClass.EQUIVALENCE):
        if not all(succ[v] & ~succ[u] & full == 0 for u in range(n) for v in members(succ[u])):
            return False
        if cls == FrameClass.TRANSITIVE:
            return True
        if not refl:
            return False
        if cls == FrameClass.REFLEXIVE_TRANSITIVE:
            return True
    if cls in (FrameClass.SYMMETRIC, FrameClass.EQUIVALENCE):
        return all(succ[v] >> u & 1 for u in range(n) for v in members(succ[u]))
    if cls == FrameClass.EUCLIDEAN:
        return all(succ[u] & ~succ[v] & full == 0 for u in range(n) for v in members(succ[u]))
    raise ValueError(cls)


# ---------------------------------------------------------------------------
# Constructions


def disjoint_union(m1: KripkeModel, m2: KripkeModel):
    """Disjoint union with world ids tagged ``1:w`` and ``2:w``.

    Returns ``(union, inj1, inj2)`` where the injections are dicts from
    the original world ids to the tagged ones.
    """
    m1, m2 = m1.base, m2.base
    inj1 = {w: f"1:{w}" for w in m1.worlds}
    inj2 = {w: f"2:{w}" for w in m2.worlds}
    agents = tuple(dict.fromkeys(m1.agents + m2.agents))
    rel = {a: {(inj1[u], inj1[v]) for u, v in m1.rel.get(a, ())}
              | {(inj2[u], inj2[v]) for u, v in m2.rel.get(a, ())} for a in agents}
    val = {}
    for p in dict.fromkeys(list(m1.val) + list(m2.val)):
        val[p] = {inj1[w] for w in m1.val.get(p, ())} | {inj2[w] for w in m2.val.get(p, ())}
    worlds = tuple(inj1.values()) + tuple(inj2.values())
    return KripkeModel(worlds, rel, val, agents), inj1, inj2


def restrict(m, keep) -> Model:
    """Submodel on the worlds in ``keep`` (declaration order preserved)."""
    keep = set(keep)
    if not keep:
        raise EmptyResult("update leaves no worlds")
    if isinstance(m, LtsModel):
        raise ModelError("LTS models have no update operations")
    base = m.base
    worlds = [w for w in base.worlds if w in keep]
    rel = {a: {(u, v) for u, v in base.rel[a] if u in keep and v in keep} for a in base.agents}
    val = {p: ws & keep for p, ws in base.val.items()}
    nb = KripkeModel(worlds, rel, val, base.agents)
    if isinstance(m, KripkeModel):
        return nb
    if isinstance(m, FOEpistemicModel):
        vc = {c: {w: v for w, v in mp.items() if w in keep} for c, mp in m.vc.items()}
        return FOEpistemicModel(nb, vc, m.domain)
    tern = {k: {t for t in ts if set(t) <= keep} for k, ts in m.tern.items()}
    return TernaryModel(nb, tern, m.constants)


def announce(m, psi) -> Model:
    """Public announcement: restrict to the worlds where ``psi`` holds."""
    from .semantics import truth_set

    return restrict(m, truth_set(m, psi))


def announce_whether(m, psi, s: str) -> Model:
    """Announce ``psi`` or ``~psi``, whichever is true at ``s``."""
    from .semantics import truth_set

    require_world(m, s)
    ext = truth_set(m, psi)
    keep = ext if s in ext else set(m.worlds) - ext
    return restrict(m, keep)


def inspect(m: FOEpistemicModel, c: str, s: str) -> FOEpistemicModel:
    """Public inspection of ``c`` at ``s``: keep worlds where ``c`` has
    the same value as at ``s``."""
    require_world(m, s)
    if not isinstance(m, FOEpistemicModel):
        raise ModelError("inspection needs a first-order model")
    v = m.value(c, s)
    return restrict(m, [w for w in m.worlds if m.vc[c][w] == v])


def derive_ternary(m: FOEpistemicModel) -> TernaryModel:
    """Ternary relation of successor pairs that disagree on each constant."""
    base = m.base
    tern = {}
    for a in base.agents:
        for c in m.constants:
            triples = set()
            for s in base.worlds:
                succ = base.successors(a, s)
                for u, v in itertools.product(succ, succ):
                    if m.vc[c][u] != m.vc[c][v]:
                        triples.add((s, u, v))
            tern[(a, c)] = triples
    return TernaryModel(base, tern, m.constants)


@dataclass(frozen=True)
class Violation:
    condition: str   # 'symmetry' | 'inclusion' | 'anti-euclidean'
    agent: str
    const: str
    witness: tuple


def check_ternary_conditions(m: TernaryModel, conditions=("symmetry", "inclusion", "anti-euclidean")):
    """List every violated frame condition, each with a witness tuple.

    The anti-Euclidean witness is ``(s, t1, t2, u)``: ``s R t1 t2`` and
    ``s -> u`` but neither ``s R u t1`` nor ``s R u t2``.
    """
    out = []
    base = m.base
    for (a, c), triples in sorted(m.tern.items()):
        rel = base.rel.get(a, frozenset())
        for (s, u, v) in sorted(triples):
            if "symmetry" in conditions and (s, v, u) not in triples:
                out.append(Violation("symmetry", a, c, (s, u, v)))
            if "inclusion" in conditions and ((s, u) not in rel or (s, v) not in rel):
                out.append(Violation("inclusion", a, c, (s, u, v)))
            if "anti-euclidean" in conditions:
                for w in base.successors(a, s):
                    if (s, w, u) not in triples and (s, w, v) not in triples:
                        out.append(Violation("anti-euclidean", a, c, (s, u, v, w)))
    return out
