"""The simultaneous unraveling of a DCTRS into a TRS."""

from __future__ import annotations

from ctrslab.systems import (
    U_SYMBOL,
    RewriteSystem,
    Rule,
    deterministic_violation,
    is_left_linear,
    is_non_erasing,
    is_right_linear,
    is_wll_rule,
)
from ctrslab.terms import App, Var, variables
from ctrslab.transforms.context import CondMeta, TransformContext, TransformError


def unravel(system: RewriteSystem) -> TransformContext:
    """Replace each conditional rule by a chain of unconditional rules through U symbols.

    ``l -> r <= s1 ->> t1, ..., sk ->> tk`` becomes
    ``l -> U1(s1, X1)``, ``Ui(ti, Xi) -> U(i+1)(s(i+1), X(i+1))``, ``Uk(tk, Xk) -> r``
    with ``Xi = Var(l, t1, ..., t(i-1))``. Rules of the chain are labelled
    ``<label>.1`` .. ``<label>.(k+1)``; unconditional rules keep their label.
    """
    for r in system.rules:
        i = deterministic_violation(r)
        if i is not None:
            raise TransformError(
                "rule %s is not deterministic: condition %d uses unbound variables" % (r.label, i),
                rule=r.label,
                detail=i,
            )
    taken = set(system.signature)
    counter = 0
    rules = []
    ctx = TransformContext(source=system, target=None, method="U")
    for f in system.signature:
        ctx.symbol_table[f] = f
    for r in system.rules:
        if not r.conditions:
            rules.append(r)
            ctx.rule_correspondence[(r.label, 1)] = r.label
            continue
        ts = r.condition_rhss
        X = [variables(r.lhs, *ts[: j]) for j in range(len(ts))]
        names = []
        for _ in r.conditions:
            counter += 1
            while "u%d" % counter in taken:
                counter += 1
            name = "u%d" % counter
            taken.add(name)
            names.append(name)
            ctx.introduced[name] = U_SYMBOL
        meta = CondMeta(r.label, r.root, system.conditional_rank[r.label][1], len(ts), X, [], names)
        ctx.cond_meta[r.label] = meta

        def u(j, first):
            return App(names[j], (first,) + tuple(Var(x) for x in X[j]))

        chain = [(r.lhs, u(0, r.conditions[0][0]))]
        for j in range(1, len(ts)):
            chain.append((u(j - 1, ts[j - 1]), u(j, r.conditions[j][0])))
        chain.append((u(len(ts) - 1, ts[-1]), r.rhs))
        for j, (lhs, rhs) in enumerate(chain, 1):
            label = "%s.%d" % (r.label, j)
            rules.append(Rule(label, lhs, rhs))
            ctx.rule_correspondence[(r.label, j)] = label
    ctx.target = RewriteSystem.build(rules, roles=dict(ctx.introduced))
    return ctx


_RULE_PROPS = {
    "ll": is_left_linear,
    "rl": is_right_linear,
    "wll": is_wll_rule,
    "ne": is_non_erasing,
}


def ultra_check(system: RewriteSystem, prop: str) -> bool:
    """Whether every rule of the unraveled system has property ``prop`` (ll, rl, wll, ne)."""
    try:
        test = _RULE_PROPS[prop]
    except KeyError:
        raise ValueError("unknown property %r (expected one of %s)" % (prop, ", ".join(_RULE_PROPS))) from None
    return all(test(r) for r in unravel(system).target.rules)
