"""Reproducible generation of terms and small conditional systems."""

from __future__ import annotations

import random
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence

from ctrslab.systems import RewriteSystem, Rule
from ctrslab.terms import App, Term, Var


def _by_arity(signature: Dict[str, int]):
    consts = sorted(f for f, n in signature.items() if n == 0)
    funs = sorted(f for f, n in signature.items() if n > 0)
    return consts, funs


def signature_of(system: RewriteSystem) -> Dict[str, int]:
    return {s.name: s.arity for s in system.signature.values()}


def random_term(
    signature: Dict[str, int],
    rng: random.Random,
    max_depth: int = 3,
    variables: Sequence[str] = (),
    var_prob: float = 0.2,
) -> Term:
    """A random term of depth at most ``max_depth`` (a constant or variable at depth 0)."""
    consts, funs = _by_arity(signature)
    if not consts and not variables:
        raise ValueError("signature has no constants and no variables were given")

    def leaf():
        if variables and (not consts or rng.random() < var_prob):
            return Var(rng.choice(list(variables)))
        return App(rng.choice(consts), ())

    def go(depth):
        if depth == 0 or not funs or rng.random() < 0.3:
            return leaf()
        f = rng.choice(funs)
        return App(f, [go(depth - 1) for _ in range(signature[f])])

    return go(max_depth)


def enumerate_terms(signature: Dict[str, int], max_depth: int, limit: Optional[int] = None) -> Iterator[Term]:
    """Ground terms by increasing depth, in a fixed order."""
    consts, funs = _by_arity(signature)
    levels: List[List[Term]] = [[App(c, ()) for c in consts]]
    count = 0
    for t in levels[0]:
        if limit is not None and count >= limit:
            return
        yield t
        count += 1
    seen = list(levels[0])
    for depth in range(1, max_depth + 1):
        new = []
        for f in funs:
            n = signature[f]
            for args in product(seen, repeat=n):
                if all(a not in levels[-1] for a in args):
                    continue  # already produced at a smaller depth
                new.append(App(f, args))
        for t in new:
            if limit is not None and count >= limit:
                return
            yield t
            count += 1
        levels.append(new)
        seen = seen + new


def random_terms(
    signature: Dict[str, int], n: int, seed: int = 0, max_depth: int = 3, variables: Sequence[str] = ()
) -> List[Term]:
    """``n`` random terms; a signature without constants gets leaves from ``variables`` (default ``x``)."""
    rng = random.Random(seed)
    if not variables and not any(a == 0 for a in signature.values()):
        variables = ("x",)
    return [random_term(signature, rng, max_depth, variables) for _ in range(n)]


def random_seeds(system: RewriteSystem, n: int, seed: int = 0, max_depth: int = 3) -> List[Term]:
    """Up to ``n`` distinct random terms rooted by a defined symbol of ``system``."""
    defined = system.defined_symbols
    out: List[Term] = []
    for t in random_terms(signature_of(system), 50 * max(n, 1), seed=seed, max_depth=max_depth):
        if type(t) is App and t.fn in defined and t not in out:
            out.append(t)
            if len(out) >= n:
                break
    return out


# -- systems ----------------------------------------------------------------

_CONSTRUCTORS = {"c0": 0, "c1": 0, "s": 1, "p": 2}
_DEFINED = {"f": 1, "g": 1, "h": 2}


def random_wll_dctrs(
    rng: random.Random,
    max_rules: int = 6,
    max_conditions: int = 2,
    nonlinear_prob: float = 0.0,
) -> RewriteSystem:
    """A small deterministic 3-CTRS over at most 7 symbols.

    Condition right-hand sides and left-hand sides are linear constructor
    patterns over fresh variables, so the result is WLL and U-WLL unless
    ``nonlinear_prob`` > 0, in which case a pattern variable is sometimes
    reused (which may break either property).
    """
    defined = dict(rng.sample(sorted(_DEFINED.items()), rng.randint(1, len(_DEFINED))))
    ctor_consts = ["c0", "c1"]
    ctor_funs = ["s", "p"]
    counter = [0]

    def fresh():
        counter[0] += 1
        return "x%d" % counter[0]

    def pattern(depth, bound: List[str]) -> Term:
        if bound and rng.random() < nonlinear_prob:
            return Var(rng.choice(bound))
        r = rng.random()
        if depth == 0 or r < 0.45:
            v = fresh()
            bound.append(v)
            return Var(v)
        if r < 0.65:
            return App(rng.choice(ctor_consts), ())
        f = rng.choice(ctor_funs)
        return App(f, [pattern(depth - 1, bound) for _ in range(_CONSTRUCTORS[f])])

    def body(depth, avail: List[str]) -> Term:
        r = rng.random()
        if depth == 0 or r < 0.35:
            if avail and rng.random() < 0.7:
                return Var(rng.choice(avail))
            return App(rng.choice(ctor_consts), ())
        if r < 0.65:
            f = rng.choice(sorted(defined))
            n = defined[f]
        else:
            f = rng.choice(ctor_funs)
            n = _CONSTRUCTORS[f]
        return App(f, [body(depth - 1, avail) for _ in range(n)])

    rules = []
    n_rules = rng.randint(1, max_rules)
    for i in range(n_rules):
        counter[0] = 0
        f = rng.choice(sorted(defined))
        bound: List[str] = []
        lhs = App(f, [pattern(1, bound) for _ in range(defined[f])])
        conds = []
        for _ in range(rng.randint(0, max_conditions)):
            s = body(1, list(bound))
            t = pattern(1, bound)
            conds.append((s, t))
        rhs = body(2, list(bound))
        rules.append(Rule("r%d" % (i + 1), lhs, rhs, tuple(conds)))
    return RewriteSystem.build(rules)


def random_systems(n: int, seed: int = 0, **kw) -> List[RewriteSystem]:
    rng = random.Random(seed)
    return [random_wll_dctrs(rng, **kw) for _ in range(n)]
