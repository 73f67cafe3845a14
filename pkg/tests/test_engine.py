import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import term
from ctrslab import fixtures
from ctrslab.engine import (
    ConditionalEngine,
    EngineCaps,
    EngineError,
    ctrs_reachable,
    ctrs_step,
    trs_reachable,
    trs_successors,
)
from ctrslab.generators import enumerate_terms, signature_of
from ctrslab.syntax import parse_system
from ctrslab.systems import RewriteSystem
from ctrslab.terms import App, match, replace_at, subterm_at
from ctrslab.transforms import unravel

R1 = fixtures.load("r1")
R4 = fixtures.load("r4")
U1 = unravel(R1)
U4 = unravel(R4)


def test_trs_successors_of_g_f_a():
    t = term(R4, "g(f(a))")
    steps = trs_successors(U4.target, t)
    u = U4.cond_meta["r1"].u_symbols[0]
    assert ((), "r7", term(R4, "h(f(a), f(a))")) in steps
    assert ((0,), "r1.1", App("g", [App(u, [App("a"), App("a")])])) in steps


def test_trs_successors_of_normal_forms_and_qsort_nil():
    assert trs_successors(U4.target, App("d")) == []
    assert trs_successors(U1.target, term(R1, "qsort(nil)")) == [((), "r4", App("nil"))]


def test_trs_engine_rejects_conditional_systems():
    with pytest.raises(EngineError):
        trs_reachable(R1, App("nil"))


def test_trs_reachable_small_and_zero_budget():
    g = trs_reachable(U4.target, App("a"))
    assert set(g.nodes) == {App("a"), App("c"), App("d")} and g.complete
    g = trs_reachable(U4.target, App("a"), EngineCaps(max_steps=0))
    assert set(g.nodes) == {App("a")} and g.truncated
    g = trs_reachable(U4.target, App("c"), EngineCaps(max_steps=0))
    assert set(g.nodes) == {App("c")} and g.complete


def test_node_cap_truncates():
    g = trs_reachable(U1.target, term(R1, "qsort(cons(s(0), cons(0, nil)))"), EngineCaps(max_nodes=5))
    assert g.truncated and len(g) == 5
    assert g.normal_forms() == []


def test_ctrs_step_examples():
    assert term(R1, "pair(nil, cons(s(0), nil))") in ctrs_step(R1, term(R1, "split(0, cons(s(0), nil))"), 2)
    assert {App("c"), App("d")} <= ctrs_step(R4, term(R4, "f(a)"), 2)
    assert ctrs_step(R4, App("c"), 3) == set()


def test_ctrs_reachable_examples():
    assert App("d") in ctrs_reachable(R4, term(R4, "h(f(a), f(f(b)))"), EngineCaps(max_level=3))
    assert App("c") in ctrs_reachable(R4, term(R4, "g(f(a))"), EngineCaps(max_level=3))
    g = ctrs_reachable(R1, term(R1, "qsort(cons(s(0), cons(0, nil)))"))
    assert term(R1, "cons(0, cons(s(0), nil))") in g


def test_level_zero_does_nothing():
    assert ctrs_step(R4, term(R4, "f(a)"), 0) == set()


def test_derivation_path_is_valid():
    eng = ConditionalEngine(R4, EngineCaps(max_level=3))
    path = eng.derivation(term(R4, "g(f(a))"), App("c"), 3)
    assert path and path[0].source == term(R4, "g(f(a))") and path[-1].target == App("c")
    for a, b in zip(path, path[1:]):
        assert a.target == b.source


def test_type4_and_nondeterministic_rules_rejected():
    bad = parse_system("(VAR x y)\n(RULES\n  f(x) -> x | g(y) == x\n)")
    with pytest.raises(EngineError):
        ConditionalEngine(bad)


SEEDS = {name: [t for t in enumerate_terms(signature_of(R), 2, limit=60) if t.fn in R.defined_symbols][:12]
         for name, R in (("r1", R1), ("r4", R4))}


@pytest.mark.parametrize("name", ["r1", "r4"])
def test_level_monotonicity(name):
    R = fixtures.load(name)
    caps = EngineCaps(max_steps=6, max_nodes=500)
    for t in SEEDS[name]:
        for n in range(3):
            assert ctrs_step(R, t, n, caps) <= ctrs_step(R, t, n + 1, caps)


@pytest.mark.parametrize("name", ["r1", "r4"])
def test_edges_revalidate(name):
    R = fixtures.load(name)
    caps = EngineCaps(max_steps=5, max_nodes=300, max_level=3)
    for t in SEEDS[name][:6]:
        g = ctrs_reachable(R, t, caps)
        for e in g.edges:
            rule = R.rule(e.rule)
            redex = subterm_at(e.source, e.position)
            sigma = match(rule.lhs, redex)
            assert sigma is not None
            contractum = subterm_at(e.target, e.position)
            assert match(rule.rhs, contractum, sigma) is not None
            assert replace_at(e.source, e.position, contractum) == e.target


@pytest.mark.parametrize("name", ["r1", "r4"])
def test_unraveling_covers_every_engine_edge(name):
    R = fixtures.load(name)
    U = unravel(R).target
    caps = EngineCaps(max_steps=5, max_nodes=300, max_level=3)
    for t in SEEDS[name][:6]:
        for e in ctrs_reachable(R, t, caps).edges:
            assert e.target in trs_reachable(U, e.source, EngineCaps(max_steps=12), goal=lambda u: u == e.target)


def test_unconditional_fragment_agrees_at_level_one():
    R2 = [r for r in R1.rules if not r.conditions]
    trs = RewriteSystem.build(R2)
    for t in enumerate_terms(signature_of(trs), 2, limit=80):
        expected = {u for _, _, u in trs_successors(trs, t)}
        assert ctrs_step(trs, t, 1) == expected


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3))
def test_leq_decides_order(m, n):
    def peano(k):
        t = App("0")
        for _ in range(k):
            t = App("s", [t])
        return t

    g = trs_reachable(U1.target, App("leq", [peano(m), peano(n)]))
    assert g.normal_forms() == [App("true" if m <= n else "false")]


def test_caps_parse():
    caps = EngineCaps.parse("max_steps=3, max-level=2")
    assert caps.max_steps == 3 and caps.max_level == 2
    with pytest.raises(ValueError):
        EngineCaps.parse("depth=3")
    with pytest.raises(ValueError):
        EngineCaps(max_steps=-1)


def test_default_caps_from_environment(monkeypatch):
    monkeypatch.setenv("CTRSLAB_DEFAULT_CAPS", "max_nodes=7")
    assert EngineCaps.default().max_nodes == 7
