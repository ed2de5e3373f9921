import random

import pytest
from hypothesis import given, settings, strategies as st

from knowwh import generate, syntax as S
from knowwh.fixtures import MODEL_A, MODEL_B, MODEL_KH1, MODEL_KH3, MODEL_KV
from knowwh.models import (FOEpistemicModel, FrameClass, KripkeModel, TernaryModel, UnknownSymbol,
                           derive_ternary)
from knowwh.parser import parse
from knowwh.semantics import (FragmentMismatch, eval as ev, eval_el, eval_kv, eval_mlkv, eval_ncl,
                              kd_holds, truth_set)

import oracle
from strategies import FT, formulas


def test_eval_el_examples():
    assert eval_el(MODEL_A, "s", parse("K{i} p"))
    assert eval_el(MODEL_A, "s", parse("K{i} K{i} p"))
    assert eval_el(MODEL_B, "s'", parse("K{i} F"))


def test_eval_ncl_examples():
    assert eval_ncl(MODEL_A, "s", parse("Kw{i} q"))
    assert eval_ncl(MODEL_B, "s'", parse("Kw{i} q"))


def test_eval_kv_examples():
    assert not eval_kv(MODEL_KV, "w1", parse("Kv{1}(p,$c)"))
    assert eval_kv(MODEL_KV, "w1", parse("Kv{1}(F,$c)"))
    assert eval_kv(MODEL_KV, "w1", parse("[$c] Kv{1}(p,$c)"))


def test_eval_kv_agent_two_sees_only_itself():
    assert eval_kv(MODEL_KV, "w1", parse("Kv{2}($c)"))
    assert not eval_kv(MODEL_KV, "w1", parse("K{1}Kv{1}($c)"))


def test_eval_mlkv_examples():
    t = derive_ternary(MODEL_KV)
    assert eval_mlkv(t, "w1", parse("dia{1,$c} p"))
    assert not eval_mlkv(t, "w1", parse("dia{1,$c}(p, ~p)"))


def test_dispatch_examples():
    assert ev(MODEL_KH3, "s1", parse("Kh(p,q)"))
    with pytest.raises(FragmentMismatch):
        ev(MODEL_A, "s", parse("Kh(p,q)"))
    assert ev(MODEL_KV, "w1", parse("Kd{1}($c,$c)"))


def test_gated_evaluators_reject_other_fragments():
    with pytest.raises(FragmentMismatch):
        eval_el(MODEL_A, "s", parse("Kw{i}p"))
    with pytest.raises(FragmentMismatch):
        ev(MODEL_A, "s", parse("Kv{i}($c)"))


def test_unknown_atoms_are_false_and_unknown_world_errors():
    assert not ev(MODEL_A, "s", parse("zz"))
    with pytest.raises(UnknownSymbol):
        ev(MODEL_A, "nowhere", parse("p"))


def test_undeclared_constant_is_an_error():
    with pytest.raises(UnknownSymbol):
        ev(MODEL_KV, "w1", parse("Kv{1}($zz)"))


def test_announcement_vacuous_at_false_world():
    m = KripkeModel(["a", "b"], {"i": [("a", "b")]}, {"p": ["b"]})
    assert ev(m, "a", parse("[p]F"))
    assert not ev(m, "a", parse("<p>T"))
    assert ev(m, "a", parse("[dia{i}p] box{i}F"))


def test_announce_whether_on_fixture():
    # Announcing whether q at s of MODEL_A keeps both worlds (q false at both).
    assert ev(MODEL_A, "s", parse("[?q] dia{i} T"))


def test_truth_set():
    assert truth_set(MODEL_KH1, parse("p")) == {"s1"}


def test_kd_primitive_examples():
    assert kd_holds(MODEL_KV, "w1", "1", "c", "c")
    assert not kd_holds(FOEpistemicModel(MODEL_KV.base, {"c": {"w1": "0", "w2": "0"},
                                                          "d": {"w1": "0", "w2": "1"}}, ("0", "1")),
                        "w1", "1", "c", "d")


def test_kd_desugared_differs_off_equivalence_models():
    # s sees only t; t sees u and v, which agree on c but not on d.
    base = KripkeModel(["s", "t", "u", "v"], {"i": [("s", "t"), ("t", "u"), ("t", "v")]})
    m = FOEpistemicModel(base, {"c": dict.fromkeys(base.worlds, "0"),
                                "d": {"s": "0", "t": "0", "u": "0", "v": "1"}}, ("0", "1"))
    assert kd_holds(m, "s", "i", "c", "d")
    assert not ev(m, "s", S.kd("i", "c", "d"))


# ---------------------------------------------------------------------------
# Agreement with the independent oracle


def _random_model(kind, seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    if kind == "kripke":
        return generate.random_kripke(rng, n, agents=("i", "1"), atoms=("p", "q", "r"))
    if kind == "fo":
        return generate.random_fo(rng, n, agents=("i", "1"), atoms=("p", "q", "r"),
                                  consts=("c", "d"), values=rng.randint(1, 3))
    if kind == "ternary":
        return generate.random_ternary(rng, n, agents=("i", "1"), atoms=("p", "q", "r"),
                                       consts=("c", "d"))
    return generate.random_lts(rng, n, atoms=("p", "q", "r"))


_CASES = [("kripke", FT.EL), ("kripke", FT.NCL), ("fo", FT.ELKVR), ("fo", FT.PALKVR),
          ("fo", FT.PILKV), ("ternary", FT.MLKV), ("lts", FT.LKH)]


@pytest.mark.parametrize("kind,frag", _CASES)
def test_agrees_with_oracle(kind, frag):
    @settings(max_examples=150, deadline=None)
    @given(formulas(frag, max_leaves=8), st.integers(0, 10**6))
    def check(phi, seed):
        m = _random_model(kind, seed)
        for w in m.worlds:
            assert ev(m, w, phi) == oracle.holds(m, w, phi)
    check()


# ---------------------------------------------------------------------------
# Invariants


@settings(max_examples=200, deadline=None)
@given(formulas(FT.NCL, max_leaves=6), st.integers(0, 10**6))
def test_kw_negation_symmetry(phi, seed):
    m = _random_model("kripke", seed)
    for w in m.worlds:
        assert ev(m, w, S.Kw("i", phi)) == ev(m, w, S.Kw("i", S.Not(phi)))


@settings(max_examples=200, deadline=None)
@given(formulas(FT.NCL, max_leaves=5), formulas(FT.NCL, max_leaves=5), st.integers(0, 10**6))
def test_announcing_whether_law(phi, psi, seed):
    m = _random_model("kripke", seed)
    law = S.Iff(S.AnnounceWhether(phi, psi), S.And(S.Announce(phi, psi), S.Announce(S.Not(phi), psi)))
    assert truth_set(m, law) == set(m.worlds)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_kd_agreement_on_equivalence_models(seed):
    rng = random.Random(seed)
    m = generate.random_fo(rng, rng.randint(1, 5), consts=("c", "d"), values=rng.randint(1, 3),
                           cls=FrameClass.EQUIVALENCE)
    for w in m.worlds:
        prim = kd_holds(m, w, "i", "c", "d")
        assert prim == ev(m, w, S.kd("i", "c", "d"))
        assert prim == oracle.kd_primitive(m, w, "i", "c", "d")


@settings(max_examples=150, deadline=None)
@given(formulas(FT.PILKV, max_leaves=5), st.integers(0, 10**6))
def test_inspection_order_irrelevant(phi, seed):
    m = _random_model("fo", seed)
    lhs = S.Inspect("c", S.Inspect("d", phi))
    rhs = S.Inspect("d", S.Inspect("c", phi))
    assert truth_set(m, lhs) == truth_set(m, rhs)


@settings(max_examples=150, deadline=None)
@given(formulas(FT.ELKVR, max_leaves=5, agents=("i",)), st.integers(0, 10**6))
def test_knowing_the_dependence_helps(phi, seed):
    rng = random.Random(seed)
    m = generate.random_fo(rng, rng.randint(1, 5), consts=("c", "d"), values=rng.randint(1, 3),
                           cls=FrameClass.EQUIVALENCE)
    law = S.Implies(S.And(S.kd("i", "c", "d"), S.Kv("i", phi, "c")), S.Kv("i", phi, "d"))
    assert truth_set(m, law) == set(m.worlds)


@settings(max_examples=150, deadline=None)
@given(formulas(FT.ELKVR, max_leaves=5, agents=("i",), consts=("c",)), st.integers(0, 10**6))
def test_derived_ternary_diamond_is_negated_kv(phi, seed):
    # phi only uses K, which the ternary evaluator cannot read, so compare on its extension.
    rng = random.Random(seed)
    m = generate.random_fo(rng, rng.randint(1, 4), values=rng.randint(1, 3))
    ext = truth_set(m, phi)
    t = derive_ternary(m)
    marker = S.Atom("x")
    tval = dict(t.base.val, x=frozenset(ext))
    t = TernaryModel(KripkeModel(t.base.worlds, t.base.rel, tval, t.base.agents), t.tern, t.constants)
    m2 = FOEpistemicModel(KripkeModel(m.base.worlds, m.base.rel, tval, m.base.agents), m.vc, m.domain)
    for w in m.worlds:
        assert ev(t, w, S.DiaC("i", "c", marker)) == ev(m2, w, S.Not(S.Kv("i", marker, "c")))
        assert ev(m, w, S.Not(S.Kv("i", phi, "c"))) == ev(m2, w, S.Not(S.Kv("i", marker, "c")))
