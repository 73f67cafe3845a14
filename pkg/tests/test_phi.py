import random
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import term
from ctrslab import fixtures
from ctrslab.engine import EngineCaps, trs_reachable
from ctrslab.generators import random_term, signature_of
from ctrslab.phi import (
    HAS_EVALUATION,
    NO_EVALUATION,
    STUCK,
    IllPlacedTerm,
    evaluation_state,
    is_well_placed,
    phi,
    phi_cardinality,
    phi_member,
    phi_subst,
)
from ctrslab.syntax import parse_term
from ctrslab.terms import App, Var, apply_subst, positions
from ctrslab.transforms import bar, guarded_bar, hat, sr_transform

R4 = fixtures.load("r4")
CTX4 = sr_transform(R4)
E1 = CTX4.cond_meta["r1"].eval_symbols[0]
U1 = CTX4.unraveled.cond_meta["r1"].u_symbols[0]


def ext_term(text):
    return parse_term(text.replace("E1", E1), signature=CTX4.target)


RUNNING = "f^(a, E1(sq(c)), bot)"


@lru_cache(maxsize=None)
def derivation_nodes(name, seeds):
    R = fixtures.load(name)
    ctx = sr_transform(R)
    nodes = []
    for s in seeds:
        g = trs_reachable(ctx.target, guarded_bar(term(R, s), ctx), EngineCaps(max_steps=10, max_nodes=1500))
        nodes.extend(g.nodes)
    return ctx, tuple(nodes)


NODES = {
    "r4": ("h(f(a), f(f(b)))", "g(f(a))"),
    "r1": ("qsort(cons(s(0), cons(0, nil)))", "split(0, cons(s(0), nil))"),
}


def test_running_example():
    t = ext_term(RUNNING)
    assert is_well_placed(t, CTX4)
    assert phi(t, CTX4).terms == {term(R4, "f(a)"), App(U1, [App("c"), App("a")])}
    assert evaluation_state(t, CTX4) == HAS_EVALUATION


def test_product_example_has_four_distinct_terms():
    t = ext_term("h(%s, %s)" % (RUNNING, RUNNING))
    fa, ua = term(R4, "f(a)"), App(U1, [App("c"), App("a")])
    want = {App("h", [x, y]) for x in (fa, ua) for y in (fa, ua)}
    res = phi(t, CTX4)
    assert res.terms == want and res.cardinality == 4


def test_misplaced_bottom_and_eval():
    assert not is_well_placed(ext_term("f^(bot, bot, bot)"), CTX4)
    assert not is_well_placed(ext_term("h(bot, c)"), CTX4)
    # the first slot of f^ belongs to rule r1, the second to r2
    e2 = CTX4.cond_meta["r2"].eval_symbols[0]
    assert not is_well_placed(parse_term("f^(a, bot, %s(sq(d)))" % E1, signature=CTX4.target), CTX4)
    assert is_well_placed(parse_term("f^(a, bot, %s(sq(d)))" % e2, signature=CTX4.target), CTX4)
    with pytest.raises(IllPlacedTerm):
        phi(ext_term("h(bot, c)"), CTX4)


def test_evaluation_states():
    assert evaluation_state(bar(term(R4, "h(f(a), f(f(b)))"), CTX4), CTX4) == NO_EVALUATION
    assert evaluation_state(ext_term("g(c)"), CTX4) == NO_EVALUATION
    # an evaluation whose guard has been consumed can no longer continue
    assert evaluation_state(ext_term("f^(a, E1(c), bot)"), CTX4) == STUCK
    assert phi_cardinality(ext_term("f^(a, E1(c), bot)"), CTX4) == 1


def test_phi_of_eval_tuple_cardinality():
    ctx = sr_transform(fixtures.load("r1"))
    e2 = ctx.cond_meta["r2"].eval_symbols[1]
    t = parse_term("%s(sq(true), nil, cons(0, nil))" % e2, signature=ctx.target)
    assert phi_cardinality(t, ctx) == 1


def test_cap_truncates():
    t = ext_term("h(h(%s, %s), h(%s, %s))" % ((RUNNING,) * 4))
    res = phi(t, CTX4, cap=5)
    assert res.truncated and res.cardinality == 16 and len(res) == 5


@pytest.mark.parametrize("name", fixtures.NAMES)
def test_bar_represents_only_itself(name):
    R = fixtures.load(name)
    ctx = sr_transform(R, check=False)
    rng = random.Random(name)
    sig = signature_of(R)
    for _ in range(300):
        s = random_term(sig, rng, 3, variables=("x",))
        assert phi(guarded_bar(s, ctx), ctx).terms == {s}


@pytest.mark.parametrize("name", sorted(NODES))
def test_hat_image_and_guard_on_derivation_nodes(name):
    ctx, nodes = derivation_nodes(name, NODES[name])
    assert len(nodes) > 50
    for t in nodes:
        assert is_well_placed(t, ctx)
        res = phi(t, ctx)
        assert hat(t, ctx) in res.terms
        assert phi_member(t, hat(t, ctx), ctx)
        assert phi(App(ctx.guard, [t]), ctx).terms == res.terms
        assert not res.truncated and res.cardinality == len(res.terms)
        assert (res.cardinality == 1) == (evaluation_state(t, ctx) != HAS_EVALUATION)


@lru_cache(maxsize=None)
def placed_subterms(name):
    ctx, nodes = derivation_nodes(name, NODES[name])
    out = set()
    for t in nodes:
        for _, s in positions(t):
            if type(s) is App and s.fn != ctx.guard and is_well_placed(s, ctx):
                out.add(s)
    return sorted(out, key=repr)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_phi_closed_under_instantiation(data):
    ctx, nodes = derivation_nodes("r4", NODES["r4"])
    inner = placed_subterms("r4")
    t = data.draw(
        st.sampled_from(
            [
                ext_term("h(x, y)"),
                ext_term("f^(x, E1(sq(y)), bot)"),
                ext_term("h(f^(x, E1(sq(y)), bot), x)"),
                ext_term("g(x)"),
            ]
        )
    )
    sigma = {"x": data.draw(st.sampled_from(inner)), "y": data.draw(st.sampled_from(inner))}
    instance = apply_subst(t, sigma)
    if not is_well_placed(instance, ctx):
        return
    for t1 in phi(t, ctx).terms:
        for s1 in phi_subst(sigma, ctx, cap=64):
            assert phi_member(instance, apply_subst(t1, s1), ctx)


def test_live_evaluation_with_variables():
    t = ext_term("f^(x, E1(sq(y)), bot)")
    assert phi(t, CTX4).terms == {App("f", [Var("x")]), App(U1, [Var("y"), Var("x")])}


def test_phi_subst_is_a_product():
    sigma = {"x": ext_term(RUNNING), "y": ext_term("c")}
    combos = phi_subst(sigma, CTX4)
    assert len(combos) == 2 and all(c["y"] == App("c") for c in combos)


def test_membership_agrees_with_enumeration():
    ctx, nodes = derivation_nodes("r1", NODES["r1"])
    sample = random.Random(1).sample(list(nodes), 40)
    for t in sample:
        members = phi(t, ctx).terms
        for u in random.Random(2).sample(list(nodes), 5):
            h = hat(u, ctx)
            if h is not None:
                assert phi_member(t, h, ctx) == (h in members)
