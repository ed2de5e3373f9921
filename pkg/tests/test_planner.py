import random

import pytest
from hypothesis import given, settings, strategies as st

from knowwh import generate, syntax as S
from knowwh.fixtures import MODEL_KH1, MODEL_KH2, MODEL_KH3
from knowwh.models import LtsModel
from knowwh.parser import parse
from knowwh.planner import (NotExecutable, belief_search, eval_kh, eval_u, execute, format_plan,
                            kh_table, parse_plan, reachable_beliefs, strongly_executable)
from knowwh.semantics import compile_model, eval as ev

import oracle
from strategies import propositional


def test_strong_executability_examples():
    assert not strongly_executable(MODEL_KH1, "s1", "ab")
    assert strongly_executable(MODEL_KH3, "s2", "ru")
    assert strongly_executable(MODEL_KH1, "s4", "")


def test_execute_examples():
    assert execute(MODEL_KH3, {"s2", "s3"}, "ru") == {"s7", "s8"}
    assert execute(MODEL_KH1, {"s3", "s4"}, "") == {"s3", "s4"}
    assert execute(MODEL_KH1, {"s1"}, "a") == {"s2", "s3"}


def test_execute_reports_failing_prefix():
    with pytest.raises(NotExecutable) as info:
        execute(MODEL_KH1, {"s1"}, "ab")
    assert info.value.prefix == ("a",)
    assert info.value.state == "s3"
    assert info.value.action == "b"


def test_eval_kh_examples():
    assert eval_kh(MODEL_KH1, parse("p"), parse("q")).holds is False
    assert eval_kh(MODEL_KH2, parse("p"), parse("q")).holds is False
    res = eval_kh(MODEL_KH3, parse("p"), parse("q"))
    assert res.holds and format_plan(res.plan) == "ru"


def test_kh2_has_plans_per_world():
    assert eval_kh(MODEL_KH2, parse("r"), parse("q")).plan == ("a", "b")
    assert eval_kh(MODEL_KH2, parse("p & ~r"), parse("q")).plan == ("b", "a")


def test_empty_precondition_gives_empty_plan():
    res = eval_kh(MODEL_KH1, parse("F"), parse("F"))
    assert res.holds and res.plan == ()
    assert format_plan(res.plan) == "ε"


def test_eval_u_examples():
    assert eval_u(MODEL_KH3, parse("p | ~p"))
    assert not eval_u(MODEL_KH1, parse("p"))
    for m in (MODEL_KH1, MODEL_KH2, MODEL_KH3):
        for phi in ("p", "q", "p | q", "T"):
            f = parse(phi)
            assert eval_u(m, f) == eval_kh(m, S.Not(f), S.BOTTOM).holds


def test_parse_plan():
    assert parse_plan("ru", MODEL_KH3) == ("r", "u")
    assert parse_plan("ε", MODEL_KH3) == ()
    long = LtsModel(["s"], ["go", "stop"], {"go": [], "stop": []})
    assert parse_plan("go,stop", long) == ("go", "stop")
    assert format_plan(("go", "stop")) == "go,stop"


def test_shortest_plan_with_action_order_ties():
    # Both a and b reach q in one step; a comes first.
    m = LtsModel(["s", "t"], ["a", "b"], {"a": [("s", "t")], "b": [("s", "t")]},
                 {"p": ["s"], "q": ["t"]})
    assert eval_kh(m, parse("p"), parse("q")).plan == ("a",)


def test_nested_kh_is_global():
    m = MODEL_KH3
    inner = parse("Kh(p, q)")
    assert all(ev(m, s, inner) for s in m.states)
    assert ev(m, "s1", parse("Kh(T, Kh(p, q))"))


def test_belief_search_bound():
    rng = random.Random(5)
    for _ in range(50):
        m = generate.random_lts(rng, rng.randint(1, 6))
        st_ = compile_model(m)
        acts = [st_.succ[a] for a in m.actions]
        assert len(reachable_beliefs(st_.n, acts, st_.full)) <= 2 ** st_.n


def test_kh_table_matches_search():
    rng = random.Random(9)
    for _ in range(20):
        m = generate.random_lts(rng, rng.randint(1, 4))
        stt = compile_model(m)
        acts = [stt.succ[a] for a in m.actions]
        table = kh_table(stt.n, acts)
        for pre in range(1 << stt.n):
            for goal in range(1 << stt.n):
                assert bool(table[pre, goal]) == (belief_search(stt.n, acts, pre, goal) is not None)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**6), propositional(atoms=("p", "q"), max_leaves=4),
       propositional(atoms=("p", "q"), max_leaves=4))
def test_agrees_with_brute_force_plans(seed, pre, goal):
    rng = random.Random(seed)
    m = generate.random_lts(rng, rng.randint(1, 5), density=rng.choice([0.2, 0.3, 0.5]))
    res = eval_kh(m, pre, goal)
    pre_set = [s for s in m.states if oracle.holds(m, s, pre)]
    goal_set = {s for s in m.states if oracle.holds(m, s, goal)}
    found = oracle.brute_force_kh(m, pre_set, goal_set)
    assert res.holds == (found is not None)
    if res.holds:
        # Shortest plans have the same length; the witness is checked per world.
        assert len(res.plan) == len(found)
        for s in pre_set:
            assert oracle.per_world_executable(m, s, res.plan)
        assert execute(m, pre_set, res.plan) <= goal_set
