"""The correspondence between SR terms and sets of unraveled terms.

``phi(t)`` maps a reachable term over the extended signature to the finite
set of terms over the unraveled signature that it stands for: a defined
symbol whose extended argument holds a live condition evaluation stands for
both the plain call and the corresponding U-term.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from math import prod
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from ctrslab.terms import App, Substitution, Term, Var, match_all
from ctrslab.transforms.context import TransformContext

DEFAULT_CAP = 4096

NO_EVALUATION = "no-evaluation"
HAS_EVALUATION = "has-evaluation"
STUCK = "stuck"


class IllPlacedTerm(ValueError):
    pass


@dataclass(frozen=True)
class PhiResult:
    terms: FrozenSet[Term]
    truncated: bool
    cardinality: int

    def __contains__(self, t: Term) -> bool:
        return t in self.terms

    def __len__(self):
        return len(self.terms)


# -- placement ------------------------------------------------------------


def is_well_placed(t: Term, ctx: TransformContext) -> bool:
    """Bottom and evaluation tuples occur only in the extended slots they belong to."""
    sig = ctx.target.signature

    def ok(u: Term, slot_owner: Optional[str]) -> bool:
        # slot_owner: the rule whose extended slot ``u`` sits in, if any
        if type(u) is Var:
            return True
        sym = sig.get(u.fn)
        if sym is None or sym.arity != len(u.args):
            return False
        if u.fn == ctx.bottom:
            return slot_owner is not None
        owner = ctx.eval_owner.get(u.fn)
        if owner is not None:
            if owner[0] != slot_owner:
                return False
            return all(ok(a, None) for a in u.args)
        if slot_owner is not None:
            return False
        info = ctx.ext_symbols.get(u.fn)
        if info is not None:
            if not all(ok(a, None) for a in u.args[: info.arity]):
                return False
            return all(ok(a, info.rules[i]) for i, a in enumerate(u.args[info.arity:]))
        return all(ok(a, None) for a in u.args)

    return ok(t, None)


# -- the core recursion ---------------------------------------------------


class _Phi:
    """Per-call evaluator; memo tables live only as long as one query."""

    def __init__(self, ctx: TransformContext):
        self.ctx = ctx
        self.uctx = ctx.unraveled
        self._card: Dict[Term, int] = {}

    def live_slots(self, t: App) -> List[Tuple[str, int, Substitution, Term, List[Term]]]:
        """Live evaluations at the root of ``t``: ``(rule, j, sigma, t', sigma(X_j))``."""
        ctx = self.ctx
        info = ctx.ext_symbols[t.fn]
        orig = t.args[: info.arity]
        out = []
        for i, u in enumerate(t.args[info.arity:]):
            if type(u) is not App:
                continue
            owner = ctx.eval_owner.get(u.fn)
            if owner is None or owner[0] != info.rules[i]:
                continue
            label, j = owner
            meta = ctx.cond_meta[label]
            guarded = u.args[0]
            if type(guarded) is not App or guarded.fn != ctx.guard:
                continue
            binding = dict(zip(meta.V[j - 1], u.args[1:]))
            sigma = match_all(meta.ext_args, orig, binding)
            if sigma is None:
                continue
            values = [sigma[x] for x in meta.X[j - 1]]
            out.append((label, j, sigma, guarded.args[0], values))
        return out

    # cardinality ------------------------------------------------------

    def card(self, t: Term) -> int:
        hit = self._card.get(t)
        if hit is not None:
            return hit
        n = self._card_uncached(t)
        self._card[t] = n
        return n

    def _card_uncached(self, t: Term) -> int:
        ctx = self.ctx
        if type(t) is Var:
            return 1
        if t.fn == ctx.guard:
            return self.card(t.args[0])
        info = ctx.ext_symbols.get(t.fn)
        if info is not None:
            n = prod(self.card(a) for a in t.args[: info.arity])
            for _, _, _, inner, values in self.live_slots(t):
                n += self.card(inner) * prod(self.card(v) for v in values)
            return n
        if t.fn in ctx.constructors:
            return prod(self.card(a) for a in t.args)
        return 0

    # enumeration ------------------------------------------------------

    def gen(self, t: Term) -> Iterator[Term]:
        ctx = self.ctx
        if type(t) is Var:
            yield t
            return
        if t.fn == ctx.guard:
            yield from self.gen(t.args[0])
            return
        info = ctx.ext_symbols.get(t.fn)
        if info is not None:
            for args in self._product(t.args[: info.arity]):
                yield App(info.source, args)
            for label, j, _, inner, values in self.live_slots(t):
                u_sym = self.uctx.cond_meta[label].u_symbols[j - 1]
                for args in self._product([inner] + values):
                    yield App(u_sym, args)
            return
        if t.fn in ctx.constructors:
            for args in self._product(t.args):
                yield App(t.fn, args)

    def _product(self, ts) -> Iterator[Tuple[Term, ...]]:
        if any(self.card(a) == 0 for a in ts):
            return
        yield from _lazy_product([lambda a=a: self.gen(a) for a in ts])

    # membership -------------------------------------------------------

    def member(self, t: Term, u: Term) -> bool:
        ctx = self.ctx
        if type(t) is Var:
            return u == t
        if t.fn == ctx.guard:
            return self.member(t.args[0], u)
        if type(u) is not App:
            return False
        info = ctx.ext_symbols.get(t.fn)
        if info is not None:
            if u.fn == info.source and len(u.args) == info.arity:
                return all(self.member(a, b) for a, b in zip(t.args, u.args))
            for label, j, _, inner, values in self.live_slots(t):
                if self.uctx.cond_meta[label].u_symbols[j - 1] == u.fn:
                    parts = [inner] + values
                    return len(parts) == len(u.args) and all(self.member(a, b) for a, b in zip(parts, u.args))
            return False
        if t.fn in ctx.constructors:
            return u.fn == t.fn and len(u.args) == len(t.args) and all(
                self.member(a, b) for a, b in zip(t.args, u.args)
            )
        return False

    def has_live(self, t: Term) -> bool:
        ctx = self.ctx
        if type(t) is Var:
            return False
        if t.fn == ctx.guard:
            return self.has_live(t.args[0])
        info = ctx.ext_symbols.get(t.fn)
        if info is not None:
            return bool(self.live_slots(t)) or any(self.has_live(a) for a in t.args[: info.arity])
        if t.fn in ctx.constructors:
            return any(self.has_live(a) for a in t.args)
        return False


def _lazy_product(factories: List[Callable[[], Iterator[Term]]]) -> Iterator[Tuple[Term, ...]]:
    if not factories:
        yield ()
        return
    head, rest = factories[0], factories[1:]
    for x in head():
        for xs in _lazy_product(rest):
            yield (x,) + xs


def _require_placed(t: Term, ctx: TransformContext):
    if not is_well_placed(t, ctx):
        raise IllPlacedTerm("term is not well-placed: %r" % (t,))


def phi(t: Term, ctx: TransformContext, cap: int = DEFAULT_CAP) -> PhiResult:
    """The set of unraveled terms ``t`` represents; at most ``cap`` members are listed."""
    _require_placed(t, ctx)
    ev = _Phi(ctx)
    n = ev.card(t)
    terms = frozenset(islice(ev.gen(t), cap))
    return PhiResult(terms, n > cap, n)


def phi_cardinality(t: Term, ctx: TransformContext) -> int:
    """``|phi(t)|`` without enumeration; on an evaluation tuple, the size of its argument product."""
    ev = _Phi(ctx)
    if type(t) is App and t.fn in ctx.eval_owner:
        for a in t.args:
            _require_placed(a, ctx)
        return prod(ev.card(a) for a in t.args)
    _require_placed(t, ctx)
    return ev.card(t)


def phi_member(t: Term, u: Term, ctx: TransformContext) -> bool:
    """Decide ``u in phi(t)`` structurally."""
    _require_placed(t, ctx)
    return _Phi(ctx).member(t, u)


def phi_subst(sigma: Substitution, ctx: TransformContext, cap: int = DEFAULT_CAP) -> List[Substitution]:
    """All substitutions ``sigma'`` with ``x sigma' in phi(x sigma)`` for each ``x`` in the domain."""
    keys = list(sigma)
    for x in keys:
        _require_placed(sigma[x], ctx)
    ev = _Phi(ctx)
    combos = _lazy_product([lambda v=sigma[x]: ev.gen(v) for x in keys])
    return [dict(zip(keys, c)) for c in islice(combos, cap)]


def evaluation_state(t: Term, ctx: TransformContext) -> str:
    """``has-evaluation`` if a live condition evaluation is present, ``stuck`` if
    evaluation tuples occur but none can continue, else ``no-evaluation``."""
    _require_placed(t, ctx)
    if _Phi(ctx).has_live(t):
        return HAS_EVALUATION
    if type(t) is App and any(type(s) is App and s.fn in ctx.eval_owner for s in _subterms(t)):
        return STUCK
    return NO_EVALUATION


def _subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        if type(s) is App:
            stack.extend(s.args)

