"""Conversion of a WLL DCTRS into an equivalent WLL and U-WLL DCTRS."""

from __future__ import annotations

from collections import Counter
from typing import Dict, List

from ctrslab.systems import (
    TUPLE_LIN,
    RewriteSystem,
    Rule,
    deterministic_violation,
    is_ultra_wll,
    is_wll_rule,
    is_wll_system,
)
from ctrslab.terms import App, FreshNames, Term, Var, iter_vars, variables
from ctrslab.transforms.context import TransformContext, TransformError


def _offending_var(rule: Rule) -> str:
    binders = [rule.lhs] + rule.condition_rhss
    for x in variables(*[rule.rhs] + rule.condition_lhss):
        n = sum(1 for t in binders for y in iter_vars(t) if y == x)
        if n != 1:
            return x
    return "?"


def _rename_occurrences(t: Term, repeated: set, fresh: Dict[str, FreshNames], out: List[tuple]) -> Term:
    """Replace every occurrence of a repeated variable by its own fresh variable."""
    if type(t) is Var:
        if t.name in repeated:
            new = fresh[t.name]()
            out.append((new, t.name))
            return Var(new)
        return t
    if not t.args:
        return t
    return App(t.fn, [_rename_occurrences(a, repeated, fresh, out) for a in t.args])


def linearize(system: RewriteSystem) -> TransformContext:
    """Linearize repeated variables of l, t1..tk and re-tie them with one tuple condition.

    For each conditional rule in which some variable occurs more than once in
    ``l, t1, ..., tk``, every occurrence of such a variable gets a distinct
    fresh name ``x1 .. xj`` and the condition
    ``tuple_j(x1, ..., xj) ->> tuple_j(x1 sigma, ..., xj sigma)`` is appended,
    ``sigma`` mapping fresh names back. Other rules are kept as they are.
    """
    for r in system.rules:
        if deterministic_violation(r) is not None:
            raise TransformError("rule %s is not deterministic" % r.label, rule=r.label)
        if not is_wll_rule(r):
            x = _offending_var(r)
            raise TransformError("rule %s is not WLL (variable %s)" % (r.label, x), rule=r.label, detail=x)

    taken = set(system.signature)
    tuple_names: Dict[int, str] = {}
    ctx = TransformContext(source=system, target=None, method="T")
    rules = []
    for r in system.rules:
        binders = [r.lhs] + r.condition_rhss
        counts = Counter(x for t in binders for x in iter_vars(t))
        repeated = {x for x, n in counts.items() if n > 1}
        if not r.conditions or not repeated:
            rules.append(r)
            ctx.rule_correspondence[(r.label, 1)] = r.label
            continue
        avoid = set(variables(*r.terms()))
        fresh = {x: FreshNames(avoid, base=x) for x in repeated}
        for x in repeated:
            fresh[x].avoid = avoid  # one shared avoid-set across bases
        introduced: List[tuple] = []
        lhs = _rename_occurrences(r.lhs, repeated, fresh, introduced)
        conds = [(s, _rename_occurrences(t, repeated, fresh, introduced)) for s, t in r.conditions]
        j = len(introduced)
        if j not in tuple_names:
            name = "tuple%d" % j
            while name in taken:
                name += "_"
            taken.add(name)
            tuple_names[j] = name
            ctx.introduced[name] = TUPLE_LIN
        tup = tuple_names[j]
        conds.append((App(tup, [Var(n) for n, _ in introduced]), App(tup, [Var(o) for _, o in introduced])))
        rules.append(Rule(r.label, lhs, r.rhs, tuple(conds)))
        ctx.renamings[r.label] = dict(introduced)
        ctx.rule_correspondence[(r.label, 1)] = r.label
    for f in system.signature:
        ctx.symbol_table[f] = f
    ctx.target = RewriteSystem.build(rules, roles=dict(ctx.introduced), kind="ctrs")
    assert is_wll_system(ctx.target) and is_ultra_wll(ctx.target), "linearization post-condition"
    return ctx
