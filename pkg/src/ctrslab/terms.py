"""First-order terms, positions and substitutions.

Terms are immutable ``Var``/``App`` nodes compared structurally. A position
is a tuple of 0-based child indices (the root is ``()``). A substitution is a
plain ``dict`` from variable name to term.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from ctrslab import kernels
from ctrslab._term import App, Var

Term = Union[Var, App]
Position = Tuple[int, ...]
Substitution = Dict[str, Term]

term_size = kernels.term_size
positions = kernels.positions


class InvalidPosition(IndexError):
    pass


def const(name: str) -> App:
    return App(name, ())


def is_var(t: Term) -> bool:
    return type(t) is Var


def _var_name(v) -> str:
    return v.name if isinstance(v, Var) else v


def iter_vars(t: Term) -> Iterator[str]:
    """Variable occurrences of ``t`` left to right (with repetitions)."""
    stack = [t]
    while stack:
        s = stack.pop()
        if type(s) is Var:
            yield s.name
        else:
            stack.extend(reversed(s.args))


def variables(*terms: Term) -> List[str]:
    """Distinct variable names of ``terms`` in order of first occurrence."""
    seen: Dict[str, None] = {}
    for t in terms:
        for name in iter_vars(t):
            seen.setdefault(name, None)
    return list(seen)


def count_var_occurrences(terms: Iterable[Term], v) -> int:
    name = _var_name(v)
    return sum(1 for t in terms for x in iter_vars(t) if x == name)


def is_linear(terms: Iterable[Term]) -> bool:
    seen = set()
    for t in terms:
        for x in iter_vars(t):
            if x in seen:
                return False
            seen.add(x)
    return True


def is_ground(t: Term) -> bool:
    return next(iter_vars(t), None) is None


def function_symbols(t: Term) -> Dict[str, int]:
    """Map of every function symbol in ``t`` to the arity it is used with."""
    out: Dict[str, int] = {}
    for _, s in positions(t):
        if type(s) is App:
            out.setdefault(s.fn, len(s.args))
    return out


def match(pattern: Term, subject: Term, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    """Return the least ``sigma`` extending ``subst`` with ``pattern sigma == subject``."""
    return kernels.match(pattern, subject, subst)


def match_all(patterns, subjects, subst: Optional[Substitution] = None) -> Optional[Substitution]:
    if len(patterns) != len(subjects):
        return None
    return kernels.match(App("", tuple(patterns)), App("", tuple(subjects)), subst)


def apply_subst(t: Term, sigma: Substitution) -> Term:
    return kernels.apply_subst(t, sigma)


def subterm_at(t: Term, p: Position) -> Term:
    try:
        return kernels.subterm_at(t, tuple(p))
    except IndexError as exc:
        raise InvalidPosition(str(exc)) from None


def replace_at(t: Term, p: Position, u: Term) -> Term:
    try:
        return kernels.replace_at(t, tuple(p), u)
    except IndexError as exc:
        raise InvalidPosition(str(exc)) from None


def restrict(sigma: Substitution, names: Iterable[str]) -> Substitution:
    return {x: sigma[x] for x in names if x in sigma}


def rename(t: Term, mapping: Dict[str, str]) -> Term:
    return apply_subst(t, {k: Var(v) for k, v in mapping.items()})


class FreshNames:
    """Generates ``base1, base2, ...`` skipping anything in the avoid-set.

    Every generated name is added to the avoid-set, so one instance never
    hands out the same name twice.
    """

    def __init__(self, avoid: Iterable[str] = (), base: str = "z"):
        self.avoid = set(avoid)
        self.base = base
        self.counter = 0

    def __call__(self, base: Optional[str] = None) -> str:
        base = base or self.base
        while True:
            self.counter += 1
            name = "%s%d" % (base, self.counter)
            if name not in self.avoid:
                self.avoid.add(name)
                return name

    def var(self, base: Optional[str] = None) -> Var:
        return Var(self(base))


def canonical_vars(terms: Iterable[Term], prefix: str = "v") -> List[Term]:
    """Rename variables of a term sequence to ``v0, v1, ...`` by first occurrence."""
    terms = list(terms)
    mapping = {x: "%s%d" % (prefix, i) for i, x in enumerate(variables(*terms))}
    return [rename(t, mapping) for t in terms]


__all__ = [
    "App",
    "Var",
    "Term",
    "Position",
    "Substitution",
    "InvalidPosition",
    "FreshNames",
    "const",
    "is_var",
    "iter_vars",
    "variables",
    "count_var_occurrences",
    "is_linear",
    "is_ground",
    "function_symbols",
    "match",
    "match_all",
    "apply_subst",
    "subterm_at",
    "replace_at",
    "positions",
    "term_size",
    "restrict",
    "rename",
    "canonical_vars",
]
