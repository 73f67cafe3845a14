from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from ctrslab.systems import RewriteSystem
from ctrslab.terms import Term


class TransformError(ValueError):
    """The input system is outside the class a transformation is defined for."""

    def __init__(self, message: str, rule: Optional[str] = None, detail=None):
        super().__init__(message)
        self.rule = rule
        self.detail = detail


@dataclass
class CondMeta:
    """Per conditional rule: the variable sequences every consumer must agree on.

    ``X[j-1]`` is Var(l, t1..t(j-1)) and ``V[j-1]`` is Var(t1..t(j-1)), both in
    first-occurrence order; ``u_symbols[j-1]`` / ``eval_symbols[j-1]`` name the
    symbols introduced for condition ``j``.
    """

    label: str
    root: str
    rank: int
    k: int
    X: List[List[str]]
    V: List[List[str]]
    u_symbols: List[str] = field(default_factory=list)
    eval_symbols: List[str] = field(default_factory=list)
    ext_args: Tuple[Term, ...] = ()


@dataclass
class ExtSymbol:
    """A defined symbol of the source as it appears in the extended signature."""

    source: str
    name: str
    arity: int  # original arity n
    extra: int  # number m of conditional rules, i.e. extended arguments
    rules: List[str] = field(default_factory=list)  # labels of its conditional rules, by rank


@dataclass
class TransformContext:
    source: RewriteSystem
    target: RewriteSystem
    method: str  # "U", "T" or "SR"
    symbol_table: Dict[str, str] = field(default_factory=dict)
    rule_correspondence: Dict[Tuple[str, int], str] = field(default_factory=dict)
    cond_meta: Dict[str, CondMeta] = field(default_factory=dict)
    introduced: Dict[str, str] = field(default_factory=dict)  # new symbol -> role
    # SR only
    unraveled: Optional["TransformContext"] = None
    ext_symbols: Dict[str, ExtSymbol] = field(default_factory=dict)  # keyed by extended name
    constructors: frozenset = frozenset()
    guard: str = ""
    bottom: str = ""
    eval_owner: Dict[str, Tuple[str, int]] = field(default_factory=dict)  # eval symbol -> (rule, j)
    aux_rules: List[str] = field(default_factory=list)
    # T only
    renamings: Dict[str, Dict[str, str]] = field(default_factory=dict)  # rule -> fresh -> original

    def u_rule_for(self, sr_label: str) -> Optional[str]:
        """The unraveled rule corresponding to a non-auxiliary SR rule."""
        for key, lab in self.rule_correspondence.items():
            if lab == sr_label:
                return self.unraveled.rule_correspondence.get(key) if self.unraveled else None
        return None


def fresh_symbol(base: str, taken: Iterable[str], numbered: bool = True, start: int = 1) -> str:
    taken = set(taken)
    if not numbered:
        name = base
        while name in taken:
            name += "_"
        return name
    i = start
    while "%s%d" % (base, i) in taken:
        i += 1
    return "%s%d" % (base, i)
