from hypothesis import given, settings

from knowwh import syntax as S
from knowwh.parser import parse

from strategies import FT, formulas

p, q, r = S.Atom("p"), S.Atom("q"), S.Atom("r")


def test_fragment_examples():
    assert S.fragment(parse("Kw{i} p")) == FT.NCL
    assert S.fragment(parse("[p] Kv{i}(q,$c)")) == FT.PALKVR
    assert S.fragment(parse("Kh(p, Kw{i} q)")) == FT.MIXED


def test_fragment_of_propositional_and_el():
    assert S.fragment(parse("p & ~q")) == FT.EL
    assert S.fragment(parse("K{i}p")) == FT.EL
    assert S.fragment(parse("[$c]Kv{i}($d)")) == FT.PILKV
    assert S.fragment(parse("dia{i,$c}(p, q)")) == FT.MLKV
    assert S.fragment(parse("U p")) == FT.LKH


def test_print_examples():
    assert S.to_text(S.And(p, S.Not(q))) == "(p & ~q)"
    assert S.to_text(S.Kw("i", S.Implies(p, q))) == "Kw{i}(p -> q)"
    assert S.to_text(S.Kh(p, q)) == "Kh(p, q)"


def test_subst_examples():
    assert S.subst(S.Kw("i", p), "p", S.And(q, r)) == S.Kw("i", S.And(q, r))
    assert S.subst(S.Implies(p, p), "p", S.BOTTOM) == S.Implies(S.BOTTOM, S.BOTTOM)
    assert S.subst(S.Kv("i", p, "c"), "p", S.Not(q)) == S.Kv("i", S.Not(q), "c")


def test_subst_many_is_simultaneous():
    phi = S.And(p, q)
    assert S.subst_many(phi, {"p": q, "q": p}) == S.And(q, p)


def test_abbreviations():
    assert S.U(p) == S.Kh(S.Not(p), S.BOTTOM)
    assert S.kd("i", "c", "d") == S.K("i", S.Inspect("c", S.Kv("i", S.TOP, "d")))


def test_census_helpers():
    phi = parse("K{1}(p -> Kv{2}(q,$c)) & [$d]r")
    assert S.atoms(phi) == ["p", "q", "r"]
    assert S.agents(phi) == ["1", "2"]
    assert S.constants(phi) == ["c", "d"]
    assert S.modal_depth(phi) == 2


def test_desugar_removes_sugar():
    phi = parse("(p | q) -> dia{i} <p>q")
    core = S.desugar(phi)
    assert not S.operators(core) & {S.Or, S.Implies, S.Iff, S.Dia, S.DiaAnnounce}
    assert S.equivalent_syntax(phi, core)


@settings(max_examples=200, deadline=None)
@given(formulas(FT.PALKVR))
def test_fragment_monotone_under_subformulas(phi):
    whole = S.fragment(phi)
    for sub in S.subformulas(phi):
        assert S.fragment_leq(S.fragment(sub), whole)


@settings(max_examples=200, deadline=None)
@given(formulas(FT.MLKV))
def test_desugar_idempotent(phi):
    once = S.desugar(phi)
    assert S.desugar(once) == once
