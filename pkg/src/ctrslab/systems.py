"""Conditional rewrite rules, rewrite systems and their syntactic classification."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ctrslab.terms import (
    App,
    Term,
    Var,
    count_var_occurrences,
    function_symbols,
    is_ground,
    is_linear,
    match,
    positions,
    variables,
)

CONSTRUCTOR = "constructor"
DEFINED = "defined"
U_SYMBOL = "u-symbol"
BARRED_DEFINED = "barred-defined"
GUARD = "guard"
BOTTOM = "bottom"
TUPLE_EVAL = "tuple-eval"
TUPLE_LIN = "tuple-lin"

ROLES = (CONSTRUCTOR, DEFINED, U_SYMBOL, BARRED_DEFINED, GUARD, BOTTOM, TUPLE_EVAL, TUPLE_LIN)


class MalformedSystem(ValueError):
    """Malformed rule or system."""


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    role: str = CONSTRUCTOR

    def __post_init__(self):
        if self.arity < 0:
            raise MalformedSystem("negative arity for %s" % self.name)
        if self.role not in ROLES:
            raise MalformedSystem("unknown role %r" % self.role)
        if self.role == GUARD and self.arity != 1:
            raise MalformedSystem("guard symbol must be unary")
        if self.role == BOTTOM and self.arity != 0:
            raise MalformedSystem("bottom symbol must be a constant")


Condition = Tuple[Term, Term]


@dataclass(frozen=True)
class Rule:
    """``lhs -> rhs <= s1 ->> t1, ..., sk ->> tk`` (oriented conditions, in order)."""

    label: str
    lhs: Term
    rhs: Term
    conditions: Tuple[Condition, ...] = ()

    def __post_init__(self):
        if type(self.lhs) is Var:
            raise MalformedSystem("rule %s: left-hand side is a variable" % self.label)
        object.__setattr__(self, "conditions", tuple((s, t) for s, t in self.conditions))

    @property
    def is_conditional(self) -> bool:
        return bool(self.conditions)

    @property
    def root(self) -> str:
        return self.lhs.fn

    @property
    def condition_lhss(self) -> List[Term]:
        return [s for s, _ in self.conditions]

    @property
    def condition_rhss(self) -> List[Term]:
        return [t for _, t in self.conditions]

    def terms(self) -> List[Term]:
        out = [self.lhs, self.rhs]
        for s, t in self.conditions:
            out += [s, t]
        return out

    def __str__(self):
        text = "%r -> %r" % (self.lhs, self.rhs)
        if self.conditions:
            text += " | " + ", ".join("%r == %r" % c for c in self.conditions)
        return text


@dataclass(frozen=True, eq=False)
class RewriteSystem:
    """A signature plus an ordered rule list.

    ``kind`` is ``"trs"`` only when every rule is unconditional and
    ``Var(l) >= Var(r)``. Conditional rules of each defined symbol are ranked
    by their order of appearance.
    """

    rules: Tuple[Rule, ...]
    signature: Dict[str, Symbol]
    kind: str = "ctrs"

    def __post_init__(self):
        labels = [r.label for r in self.rules]
        if len(set(labels)) != len(labels):
            raise MalformedSystem("duplicate rule labels")
        for r in self.rules:
            for t in r.terms():
                for name, n in function_symbols(t).items():
                    sym = self.signature.get(name)
                    if sym is None or sym.arity != n:
                        raise MalformedSystem("rule %s: symbol %s/%d not in signature" % (r.label, name, n))
        if self.kind not in ("ctrs", "trs"):
            raise MalformedSystem("kind must be 'ctrs' or 'trs'")
        if self.kind == "trs":
            for r in self.rules:
                if r.conditions or not set(variables(r.rhs)) <= set(variables(r.lhs)):
                    raise MalformedSystem("rule %s is not a TRS rule" % r.label)

    @classmethod
    def build(
        cls,
        rules: Iterable[Rule],
        roles: Optional[Dict[str, str]] = None,
        extra_symbols: Iterable[Symbol] = (),
        kind: Optional[str] = None,
    ) -> "RewriteSystem":
        """Infer the signature from the rules.

        Symbols get the role given in ``roles``; otherwise ``defined`` for
        left-hand-side roots and ``constructor`` for everything else.
        """
        rules = tuple(rules)
        roles = roles or {}
        arities: Dict[str, int] = {}
        for sym in extra_symbols:
            arities[sym.name] = sym.arity
        for r in rules:
            for t in r.terms():
                for name, n in function_symbols(t).items():
                    if arities.setdefault(name, n) != n:
                        raise MalformedSystem("arity conflict for %s: %d vs %d" % (name, arities[name], n))
        roots = {r.root for r in rules}
        signature = {}
        extra_roles = {s.name: s.role for s in extra_symbols}
        for name, n in arities.items():
            role = roles.get(name) or extra_roles.get(name) or (DEFINED if name in roots else CONSTRUCTOR)
            signature[name] = Symbol(name, n, role)
        if kind is None:
            trs = all(not r.conditions and set(variables(r.rhs)) <= set(variables(r.lhs)) for r in rules)
            kind = "trs" if trs else "ctrs"
        return cls(rules, signature, kind)

    # -- derived views -------------------------------------------------

    @cached_property
    def defined_symbols(self) -> frozenset:
        return frozenset(r.root for r in self.rules)

    @cached_property
    def constructors(self) -> frozenset:
        return frozenset(self.signature) - self.defined_symbols

    @cached_property
    def unconditional_part(self) -> Tuple[Rule, ...]:
        """R_u: every rule with its conditions dropped."""
        return tuple(Rule(r.label, r.lhs, r.rhs) for r in self.rules)

    @cached_property
    def rules_by_root(self) -> Dict[str, List[Rule]]:
        out: Dict[str, List[Rule]] = {}
        for r in self.rules:
            out.setdefault(r.root, []).append(r)
        return out

    @cached_property
    def step_index(self) -> Dict[str, list]:
        """Root symbol -> [(label, lhs, rhs)] over all rules, for the step kernel."""
        return {f: [(r.label, r.lhs, r.rhs) for r in rs] for f, rs in self.rules_by_root.items()}

    @cached_property
    def conditional_rank(self) -> Dict[str, Tuple[str, int]]:
        """Conditional rule label -> (defined symbol, 1-based rank among its conditional rules)."""
        out = {}
        counts: Dict[str, int] = {}
        for r in self.rules:
            if r.conditions:
                counts[r.root] = counts.get(r.root, 0) + 1
                out[r.label] = (r.root, counts[r.root])
        return out

    def conditional_rules_of(self, f: str) -> List[Rule]:
        return [r for r in self.rules_by_root.get(f, ()) if r.conditions]

    def rule(self, label: str) -> Rule:
        for r in self.rules:
            if r.label == label:
                return r
        raise KeyError(label)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


# -- rule predicates ----------------------------------------------------


def is_left_linear(rule: Rule) -> bool:
    return is_linear([rule.lhs])


def is_right_linear(rule: Rule) -> bool:
    return is_linear([rule.rhs])


def is_non_erasing(rule: Rule) -> bool:
    return set(variables(rule.lhs)) <= set(variables(rule.rhs))


def is_ground_conditional(rule: Rule) -> bool:
    return all(is_ground(s) and is_ground(t) for s, t in rule.conditions)


def is_wll_rule(rule: Rule) -> bool:
    """Every variable of r, s1..sk occurs exactly once in l, t1..tk."""
    binders = [rule.lhs] + rule.condition_rhss
    users = [rule.rhs] + rule.condition_lhss
    return all(count_var_occurrences(binders, x) == 1 for x in variables(*users))


def is_deterministic_rule(rule: Rule) -> bool:
    return deterministic_violation(rule) is None


def deterministic_violation(rule: Rule) -> Optional[int]:
    """1-based index of the first condition whose lhs has an unbound variable."""
    bound = set(variables(rule.lhs))
    for i, (s, t) in enumerate(rule.conditions, 1):
        if not set(variables(s)) <= bound:
            return i
        bound.update(variables(t))
    return None


def rule_type(rule: Rule) -> int:
    lvars = set(variables(rule.lhs))
    rvars = set(variables(rule.rhs))
    cvars = set(variables(*[u for c in rule.conditions for u in c]))
    if rvars | cvars <= lvars:
        return 1
    if rvars <= lvars:
        return 2
    if rvars <= lvars | cvars:
        return 3
    return 4


def is_constructor_term(t: Term, system: RewriteSystem) -> bool:
    defined = system.defined_symbols
    return all(type(s) is Var or s.fn not in defined for _, s in positions(t))


def is_reducible(t: Term, rules: Sequence[Rule]) -> bool:
    """Whether some subterm of ``t`` is an instance of some rule's lhs (conditions ignored)."""
    by_root: Dict[str, List[Term]] = {}
    for r in rules:
        by_root.setdefault(r.root, []).append(r.lhs)
    for _, s in positions(t):
        if type(s) is App:
            for lhs in by_root.get(s.fn, ()):
                if match(lhs, s) is not None:
                    return True
    return False


def is_ground_normal(t: Term, system: RewriteSystem) -> bool:
    """Ground and irreducible w.r.t. R_u (decided by matching, which is exact)."""
    return is_ground(t) and not is_reducible(t, system.unconditional_part)


def ultra_wll_violation(rule: Rule) -> Optional[str]:
    """Which clause of the U-WLL characterization ``rule`` breaks, if any."""
    if not rule.conditions:
        return None if is_wll_rule(rule) else "unconditional rule is not WLL"
    ts = rule.condition_rhss
    if not is_linear([rule.lhs] + ts[:-1]):
        return "(a) the sequence l, t1, ..., t(k-1) is not linear"
    seq = [rule.lhs] + ts
    for x in variables(rule.rhs):
        if count_var_occurrences(seq, x) > 1:
            return "(b) variable %s of r occurs more than once in l, t1, ..., tk" % x
    return None


def is_ultra_wll_rule(rule: Rule) -> bool:
    return ultra_wll_violation(rule) is None


def is_ultra_wll(system: RewriteSystem) -> bool:
    return all(is_ultra_wll_rule(r) for r in system.rules)


def is_wll_system(system: RewriteSystem) -> bool:
    return all(is_wll_rule(r) for r in system.rules)


def is_dctrs(system: RewriteSystem) -> bool:
    return all(is_deterministic_rule(r) for r in system.rules)


# -- reports ------------------------------------------------------------


@dataclass
class RuleReport:
    label: str
    ll: bool
    rl: bool
    ne: bool
    ground_conditional: bool
    wll: bool
    deterministic: bool
    syntactically_deterministic_rhs: bool
    rule_type: int
    ultra_wll: bool

    def as_dict(self):
        return dict(self.__dict__)


def classify_rule(rule: Rule, system: RewriteSystem) -> RuleReport:
    synt = all(is_constructor_term(t, system) or is_ground_normal(t, system) for t in rule.condition_rhss)
    return RuleReport(
        label=rule.label,
        ll=is_left_linear(rule),
        rl=is_right_linear(rule),
        ne=is_non_erasing(rule),
        ground_conditional=is_ground_conditional(rule),
        wll=is_wll_rule(rule),
        deterministic=is_deterministic_rule(rule),
        syntactically_deterministic_rhs=synt,
        rule_type=rule_type(rule),
        ultra_wll=is_ultra_wll_rule(rule),
    )


STRONG_DETERMINISM_NOTE = (
    "strong determinism is not decided (strong irreducibility quantifies over all "
    "normalized substitutions); only syntactic determinism is reported"
)


@dataclass
class SystemReport:
    kind: str
    size: int
    dctrs: bool
    max_type: int
    type3: bool
    wll: bool
    ll: bool
    rl: bool
    ne: bool
    ground_conditional: bool
    normal: bool
    constructor_system: bool
    syntactically_deterministic: bool
    ultra_wll: bool
    defined: List[str]
    constructors: List[str]
    rules: Dict[str, RuleReport] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def as_dict(self):
        out = dict(self.__dict__)
        out["rules"] = {k: v.as_dict() for k, v in self.rules.items()}
        return out


def classify_system(system: RewriteSystem) -> SystemReport:
    reports = {r.label: classify_rule(r, system) for r in system.rules}
    vals = list(reports.values())
    dctrs = all(v.deterministic for v in vals)
    normal = dctrs and all(is_ground_normal(t, system) for r in system.rules for t in r.condition_rhss)
    consys = all(
        is_constructor_term(a, system) for r in system.rules for a in r.lhs.args
    )
    return SystemReport(
        kind=system.kind,
        size=len(system.rules),
        dctrs=dctrs,
        max_type=max((v.rule_type for v in vals), default=1),
        type3=all(v.rule_type <= 3 for v in vals),
        wll=all(v.wll for v in vals),
        ll=all(v.ll for v in vals),
        rl=all(v.rl for v in vals),
        ne=all(v.ne for v in vals),
        ground_conditional=all(v.ground_conditional for v in vals),
        normal=normal,
        constructor_system=consys,
        syntactically_deterministic=all(v.syntactically_deterministic_rhs for v in vals),
        ultra_wll=all(v.ultra_wll for v in vals),
        defined=sorted(system.defined_symbols),
        constructors=sorted(system.constructors),
        rules=reports,
        notes=[STRONG_DETERMINISM_NOTE],
    )


PROPERTIES = {
    "wll": lambda rep: rep.wll,
    "uwll": lambda rep: rep.ultra_wll,
    "ll": lambda rep: rep.ll,
    "rl": lambda rep: rep.rl,
    "ne": lambda rep: rep.ne,
    "det": lambda rep: rep.dctrs,
    "type": lambda rep: rep.type3,
    "normal": lambda rep: rep.normal,
    "consys": lambda rep: rep.constructor_system,
}
