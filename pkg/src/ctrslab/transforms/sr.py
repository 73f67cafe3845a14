"""The SR transformation: condition evaluation stored in extra arguments of defined symbols."""

from __future__ import annotations

from dataclasses import replace
from typing import Dict, List, Optional

from ctrslab.systems import (
    BARRED_DEFINED,
    BOTTOM,
    CONSTRUCTOR,
    DEFINED,
    GUARD,
    TUPLE_EVAL,
    RewriteSystem,
    Rule,
    Symbol,
    ultra_wll_violation,
)
from ctrslab.terms import App, FreshNames, Term, Var, variables
from ctrslab.transforms.context import ExtSymbol, TransformContext, TransformError, fresh_symbol
from ctrslab.transforms.unraveling import unravel


def _ext_info(ctx: TransformContext, name: str) -> Optional[ExtSymbol]:
    return ctx.ext_symbols.get(ctx.symbol_table.get(name, ""))


def ext(t: Term, ctx: TransformContext, fresh: Optional[FreshNames] = None) -> Term:
    """Give every defined symbol its extended arguments, filled with fresh variables."""
    if fresh is None:
        fresh = FreshNames(variables(t), base="z")

    def go(u: Term) -> Term:
        if type(u) is Var:
            return u
        info = _ext_info(ctx, u.fn)
        args = [go(a) for a in u.args]
        if info is None:
            if u.fn not in ctx.constructors:
                raise TransformError("symbol %s is not in the source signature" % u.fn)
            return App(u.fn, args) if args else u
        return App(info.name, args + [fresh.var() for _ in range(info.extra)])

    return go(t)


def reset(t: Term, ctx: TransformContext) -> Term:
    """Put the bottom constant into every extended argument."""
    bottom = App(ctx.bottom, ())

    def go(u: Term) -> Term:
        if type(u) is Var:
            return u
        if u.fn == ctx.guard:
            return App(ctx.guard, [go(u.args[0])])
        if u.fn == ctx.bottom or u.fn in ctx.eval_owner:
            return bottom
        info = ctx.ext_symbols.get(u.fn)
        if info is not None:
            return App(u.fn, [go(a) for a in u.args[: info.arity]] + [bottom] * info.extra)
        if u.fn in ctx.constructors:
            return App(u.fn, [go(a) for a in u.args]) if u.args else u
        raise TransformError("symbol %s is not in the extended signature" % u.fn)

    return go(t)


def bar(t: Term, ctx: TransformContext) -> Term:
    return reset(ext(t, ctx), ctx)


def guarded_bar(t: Term, ctx: TransformContext) -> Term:
    """The initial mapping of the simulation: ``<bar(t)>``."""
    return App(ctx.guard, [bar(t, ctx)])


def hat(t: Term, ctx: TransformContext) -> Optional[Term]:
    """Strip guards and extended arguments; ``None`` where the inverse is undefined."""
    if type(t) is Var:
        return t
    if t.fn == ctx.guard:
        return hat(t.args[0], ctx)
    info = ctx.ext_symbols.get(t.fn)
    if info is not None:
        args = t.args[: info.arity]
        name = info.source
    elif t.fn in ctx.constructors:
        args, name = t.args, t.fn
    else:
        return None
    out = []
    for a in args:
        h = hat(a, ctx)
        if h is None:
            return None
        out.append(h)
    return App(name, out) if out else App(name, ())


def _slot_vars(m: int, avoid: set) -> List[str]:
    base = "z"
    while any("%s%d" % (base, j) in avoid for j in range(1, m + 1)):
        base += "'"
    return ["%s%d" % (base, j) for j in range(1, m + 1)]


def sr_transform(system: RewriteSystem, check: bool = True) -> TransformContext:
    """Transform a U-WLL DCTRS into a TRS over the extended signature.

    ``check=False`` skips the U-WLL gate (determinism is still required); the
    result is then only meaningful for structural questions such as whether
    it is WLL.
    """
    if check:
        for r in system.rules:
            why = ultra_wll_violation(r)
            if why is not None:
                raise TransformError("rule %s is not U-WLL: %s" % (r.label, why), rule=r.label, detail=why)
    uctx = unravel(system)

    taken = set(system.signature)
    ctx = TransformContext(source=system, target=None, method="SR", unraveled=uctx)
    ctx.constructors = frozenset(system.constructors)
    ctx.guard = fresh_symbol("sq", taken, numbered=False)
    taken.add(ctx.guard)
    ctx.bottom = fresh_symbol("bot", taken, numbered=False)
    taken.add(ctx.bottom)
    ctx.introduced[ctx.guard] = GUARD
    ctx.introduced[ctx.bottom] = BOTTOM

    roles: Dict[str, str] = {ctx.guard: GUARD, ctx.bottom: BOTTOM}
    for name, sym in system.signature.items():
        if name in ctx.constructors:
            ctx.symbol_table[name] = name
            roles[name] = CONSTRUCTOR
            continue
        conds = [r.label for r in system.conditional_rules_of(name)]
        ext_name = name
        if conds:
            ext_name = fresh_symbol(name + "^", taken, numbered=False)
            taken.add(ext_name)
        ctx.symbol_table[name] = ext_name
        ctx.ext_symbols[ext_name] = ExtSymbol(name, ext_name, sym.arity, len(conds), conds)
        roles[ext_name] = BARRED_DEFINED if conds else DEFINED

    counter = 0
    for r in system.rules:
        if not r.conditions:
            continue
        meta = replace(uctx.cond_meta[r.label])
        ts = r.condition_rhss
        meta.V = [variables(*ts[: j]) for j in range(len(ts))]
        meta.eval_symbols = []
        for _ in ts:
            counter += 1
            name = fresh_symbol("sq", taken, start=counter)
            counter = int(name[len("sq"):])
            taken.add(name)
            meta.eval_symbols.append(name)
            ctx.eval_owner[name] = (r.label, len(meta.eval_symbols))
            ctx.introduced[name] = TUPLE_EVAL
            roles[name] = TUPLE_EVAL
        ctx.cond_meta[r.label] = meta

    bottom = App(ctx.bottom, ())

    def guard(t: Term) -> Term:
        return App(ctx.guard, [t])

    rules: List[Rule] = []
    for r in system.rules:
        info = ctx.ext_symbols[ctx.symbol_table[r.root]]
        rule_vars = set(variables(*r.terms()))
        if not r.conditions:
            fresh = FreshNames(rule_vars, base="z")
            rules.append(Rule(r.label, ext(r.lhs, ctx, fresh), guard(bar(r.rhs, ctx))))
            ctx.rule_correspondence[(r.label, 1)] = r.label
            continue
        meta = ctx.cond_meta[r.label]
        i = meta.rank
        slots = _slot_vars(info.extra, rule_vars)
        fresh = FreshNames(rule_vars | set(slots), base="z")
        w_ext = tuple(ext(w, ctx, fresh) for w in r.lhs.args)
        meta.ext_args = w_ext

        def at_slot(u: Term) -> Term:
            extra = [Var(z) for z in slots]
            extra[i - 1] = u
            return App(info.name, list(w_ext) + extra)

        def evaluation(j: int, t: Term) -> Term:
            return App(meta.eval_symbols[j], [guard(t)] + [Var(x) for x in meta.V[j]])

        k = len(r.conditions)
        chain = [(at_slot(bottom), at_slot(evaluation(0, bar(r.conditions[0][0], ctx))))]
        for j in range(1, k):
            lhs = at_slot(evaluation(j - 1, ext(r.conditions[j - 1][1], ctx, fresh)))
            chain.append((lhs, at_slot(evaluation(j, bar(r.conditions[j][0], ctx)))))
        chain.append((at_slot(evaluation(k - 1, ext(r.conditions[k - 1][1], ctx, fresh))), guard(bar(r.rhs, ctx))))
        for j, (lhs, rhs) in enumerate(chain, 1):
            label = "%s.%d" % (r.label, j)
            rules.append(Rule(label, lhs, rhs))
            ctx.rule_correspondence[(r.label, j)] = label

    x = Var("x")
    aux = [Rule("aux.guard", guard(guard(x)), guard(x))]
    for name, sym in system.signature.items():
        n = sym.arity
        if n == 0:
            continue
        xs = [Var("x%d" % p) for p in range(1, n + 1)]
        info = ctx.ext_symbols.get(ctx.symbol_table[name])
        for p in range(n):
            args = list(xs)
            args[p] = guard(xs[p])
            if info is None:
                aux.append(Rule("aux.%s.%d" % (name, p + 1), App(name, args), guard(App(name, xs))))
            else:
                zs = [Var("z%d" % q) for q in range(1, info.extra + 1)]
                lhs = App(info.name, args + zs)
                rhs = guard(App(info.name, xs + [bottom] * info.extra))
                aux.append(Rule("aux.%s.%d" % (name, p + 1), lhs, rhs))
    ctx.aux_rules = [a.label for a in aux]
    rules.extend(aux)

    extra = [Symbol(ctx.guard, 1, GUARD), Symbol(ctx.bottom, 0, BOTTOM)]
    for name, info in ctx.ext_symbols.items():
        extra.append(Symbol(name, info.arity + info.extra, roles[name]))
    for c in ctx.constructors:
        extra.append(Symbol(c, system.signature[c].arity, CONSTRUCTOR))
    for meta in ctx.cond_meta.values():
        for j, name in enumerate(meta.eval_symbols):
            extra.append(Symbol(name, 1 + len(meta.V[j]), TUPLE_EVAL))
    ctx.target = RewriteSystem.build(rules, roles=roles, extra_symbols=extra)
    return ctx
