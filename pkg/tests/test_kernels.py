"""The compiled kernels and the pure-Python fallback agree."""

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import ground_terms, terms
from ctrslab import _kernels_py, kernels
from ctrslab.terms import App, Var

compiled = pytest.importorskip("ctrslab._kernels")

INDEX = {
    "f": [("r1", App("f", [Var("x"), Var("x")]), Var("x")), ("r2", App("f", [App("a"), Var("y")]), App("s", [Var("y")]))],
    "s": [("r3", App("s", [App("b")]), App("a"))],
    "g": [("r4", App("g", [Var("x"), Var("y"), Var("z")]), App("f", [Var("z"), Var("x")]))],
}


def test_backend_names():
    assert compiled.BACKEND == "cython"
    assert _kernels_py.BACKEND == "python"
    assert kernels.BACKEND in ("cython", "python")


def test_environment_forces_fallback():
    env = dict(os.environ, CTRSLAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import ctrslab; print(ctrslab.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@given(terms(), terms())
def test_match_agrees(p, s):
    assert compiled.match(p, s) == _kernels_py.match(p, s)


@given(terms())
def test_positions_and_size_agree(t):
    assert compiled.positions(t) == _kernels_py.positions(t)
    assert compiled.term_size(t) == _kernels_py.term_size(t)


@settings(max_examples=200)
@given(ground_terms(max_leaves=16))
def test_one_step_agrees(t):
    assert compiled.one_step(t, INDEX) == _kernels_py.one_step(t, INDEX)


@given(terms(), st.data())
def test_replace_and_subst_agree(t, data):
    pos, _ = data.draw(st.sampled_from(_kernels_py.positions(t)))
    u = data.draw(ground_terms(max_leaves=3))
    assert compiled.replace_at(t, pos, u) == _kernels_py.replace_at(t, pos, u)
    assert compiled.subterm_at(t, pos) == _kernels_py.subterm_at(t, pos)
    sigma = {"x": u}
    assert compiled.apply_subst(t, sigma) == _kernels_py.apply_subst(t, sigma)


def test_bad_position_raises_in_both():
    t = App("f", [App("a"), App("b")])
    for impl in (compiled, _kernels_py):
        with pytest.raises(IndexError):
            impl.subterm_at(t, (5,))
