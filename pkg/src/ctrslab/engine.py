"""Bounded rewriting: one-step and breadth-first reachability for TRSs, and
level-indexed conditional rewriting for deterministic CTRSs.

Every search is bounded by ``EngineCaps``. Hitting a cap marks the result
``truncated``; it never turns into a claim of non-reachability.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

from ctrslab import kernels
from ctrslab.systems import RewriteSystem, deterministic_violation, rule_type
from ctrslab.terms import App, Position, Substitution, Term

COMPLETE = "complete"
TRUNCATED = "truncated"
GOAL_REACHED = "goal-reached"

Step = Tuple[Position, str, Term]


class EngineError(ValueError):
    pass


@dataclass(frozen=True)
class EngineCaps:
    max_steps: int = 30
    max_nodes: int = 50_000
    max_level: int = 4
    max_term_size: int = 400

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError("%s must be non-negative" % f.name)

    @classmethod
    def parse(cls, text: str, base: Optional["EngineCaps"] = None) -> "EngineCaps":
        """Parse ``"max_steps=20,max_level=3"``; unnamed fields come from ``base``."""
        base = base or cls()
        updates = {}
        names = {f.name for f in fields(cls)}
        for item in filter(None, (p.strip() for p in text.split(","))):
            key, _, value = item.partition("=")
            key = key.strip().replace("-", "_")
            if key not in names:
                raise ValueError("unknown cap %r" % key)
            updates[key] = int(value)
        return replace(base, **updates)

    @classmethod
    def default(cls) -> "EngineCaps":
        env = os.environ.get("CTRSLAB_DEFAULT_CAPS")
        return cls.parse(env) if env else cls()

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class Edge:
    source: Term
    position: Position
    rule: str
    target: Term


@dataclass
class DerivationGraph:
    root: Term
    nodes: Dict[Term, int] = field(default_factory=dict)  # term -> BFS depth
    edges: List[Edge] = field(default_factory=list)
    status: str = COMPLETE
    parent: Dict[Term, Edge] = field(default_factory=dict, repr=False)

    def __contains__(self, t: Term) -> bool:
        return t in self.nodes

    def __len__(self):
        return len(self.nodes)

    @property
    def truncated(self) -> bool:
        return self.status == TRUNCATED

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    def path_to(self, t: Term) -> List[Edge]:
        """Edges of a shortest derivation from the root to ``t``."""
        if t not in self.nodes:
            raise KeyError(t)
        path = []
        while t != self.root:
            e = self.parent[t]
            path.append(e)
            t = e.source
        return path[::-1]

    def normal_forms(self) -> List[Term]:
        expanded = {e.source for e in self.edges}
        if self.status != COMPLETE:
            return []
        return [t for t in self.nodes if t not in expanded]


def _bfs(
    root: Term,
    successors: Callable[[Term], Tuple[List[Step], bool]],
    caps: EngineCaps,
    goal: Optional[Callable[[Term], bool]] = None,
    record_edges: bool = True,
) -> DerivationGraph:
    g = DerivationGraph(root, {root: 0})
    truncated = False
    if goal is not None and goal(root):
        g.status = GOAL_REACHED
        return g
    queue = deque([root])
    while queue:
        t = queue.popleft()
        depth = g.nodes[t]
        steps, partial = successors(t)
        truncated |= partial
        if depth >= caps.max_steps:
            if steps:
                truncated = True
            continue
        for pos, label, u in steps:
            if u not in g.nodes:
                if kernels.term_size(u) > caps.max_term_size:
                    truncated = True
                    continue
                if len(g.nodes) >= caps.max_nodes:
                    g.status = TRUNCATED
                    return g
                g.nodes[u] = depth + 1
                edge = Edge(t, pos, label, u)
                g.parent[u] = edge
                if record_edges:
                    g.edges.append(edge)
                if goal is not None and goal(u):
                    g.status = GOAL_REACHED
                    return g
                queue.append(u)
            elif record_edges:
                g.edges.append(Edge(t, pos, label, u))
    g.status = TRUNCATED if truncated else COMPLETE
    return g


# -- unconditional systems --------------------------------------------------


def _require_trs(system: RewriteSystem):
    if system.kind != "trs":
        raise EngineError("expected an unconditional TRS")


def trs_successors(system: RewriteSystem, t: Term) -> List[Step]:
    """All one-step contractions ``(position, rule label, result)`` of ``t``."""
    _require_trs(system)
    return kernels.one_step(t, system.step_index)


def trs_reachable(
    system: RewriteSystem,
    t: Term,
    caps: Optional[EngineCaps] = None,
    goal: Optional[Callable[[Term], bool]] = None,
) -> DerivationGraph:
    _require_trs(system)
    caps = caps or EngineCaps.default()
    index = system.step_index
    return _bfs(t, lambda u: (kernels.one_step(u, index), False), caps, goal)


# -- conditional systems ----------------------------------------------------


def _subst_key(sigma: Substitution):
    return tuple(sorted(sigma.items(), key=lambda kv: kv[0]))


class ConditionalEngine:
    """Level-indexed rewriting for a 3-DCTRS.

    A step at level ``n`` evaluates each condition ``s_i ->> t_i`` by a
    bounded search at level ``n - 1`` from ``s_i sigma``, matching ``t_i``
    against every term found. Level 0 performs no steps. Results are memoized
    per engine instance.
    """

    def __init__(self, system: RewriteSystem, caps: Optional[EngineCaps] = None):
        for r in system.rules:
            i = deterministic_violation(r)
            if i is not None:
                raise EngineError("rule %s is not deterministic (condition %d)" % (r.label, i))
            if rule_type(r) > 3:
                raise EngineError("rule %s is of type 4" % r.label)
        self.system = system
        self.caps = caps or EngineCaps.default()
        self._succ: Dict[Tuple[Term, int], Tuple[List[Step], bool]] = {}
        self._reach: Dict[Tuple[Term, int], Tuple[List[Term], bool]] = {}
        self.truncated = False

    def successors(self, t: Term, level: int) -> Tuple[List[Step], bool]:
        """Steps of ``->_(level)`` from ``t`` and whether a nested search was truncated."""
        key = (t, level)
        hit = self._succ.get(key)
        if hit is not None:
            return hit
        out: List[Step] = []
        seen = set()
        partial = False
        if level > 0:
            by_root = self.system.rules_by_root
            for pos, s in kernels.positions(t):
                if type(s) is not App:
                    continue
                for rule in by_root.get(s.fn, ()):
                    sigma = kernels.match(rule.lhs, s)
                    if sigma is None:
                        continue
                    if rule.conditions:
                        sigmas, p = self.solve(rule.conditions, sigma, level - 1)
                        partial |= p
                    else:
                        sigmas = [sigma]
                    for th in sigmas:
                        u = kernels.replace_at(t, pos, kernels.apply_subst(rule.rhs, th))
                        k = (pos, rule.label, u)
                        if k not in seen:
                            seen.add(k)
                            out.append(k)
        self._succ[key] = (out, partial)
        self.truncated |= partial
        return out, partial

    def solve(self, conditions, sigma: Substitution, level: int) -> Tuple[List[Substitution], bool]:
        """Extensions of ``sigma`` satisfying every condition at ``level`` (within caps)."""
        current = [sigma]
        partial = False
        for s, t in conditions:
            nxt = {}
            for th in current:
                reach, p = self.reachable_terms(kernels.apply_subst(s, th), level)
                partial |= p
                for u in reach:
                    th2 = kernels.match(t, u, th)
                    if th2 is not None:
                        nxt.setdefault(_subst_key(th2), th2)
            current = list(nxt.values())
            if not current:
                break
        return current, partial

    def reachable_terms(self, t: Term, level: int) -> Tuple[List[Term], bool]:
        """Bounded ``{u | t ->*_(level) u}`` and a truncation flag."""
        key = (t, level)
        hit = self._reach.get(key)
        if hit is not None:
            return hit
        if level == 0:
            # the level budget is spent; if t still has an R_u redex, deeper
            # levels might reach more, so the answer is only partial
            res = ([t], bool(kernels.one_step(t, self.system.step_index)))
        else:
            g = _bfs(t, lambda u: self.successors(u, level), self.caps, record_edges=False)
            res = (list(g.nodes), g.truncated)
        self._reach[key] = res
        self.truncated |= res[1]
        return res

    def reachable(
        self, t: Term, goal: Optional[Callable[[Term], bool]] = None, level: Optional[int] = None
    ) -> DerivationGraph:
        level = self.caps.max_level if level is None else level
        return _bfs(t, lambda u: self.successors(u, level), self.caps, goal)

    def derivation(self, s: Term, t: Term, level: int) -> Optional[List[Edge]]:
        """A shortest ``s ->*_(level) t`` found within caps, as a list of edges."""
        g = self.reachable(s, goal=lambda u: u == t, level=level)
        return g.path_to(t) if t in g else None



def ctrs_successors(system: RewriteSystem, t: Term, level: int, caps: Optional[EngineCaps] = None) -> List[Step]:
    return ConditionalEngine(system, caps).successors(t, level)[0]


def ctrs_step(system: RewriteSystem, t: Term, level: int, caps: Optional[EngineCaps] = None) -> Set[Term]:
    """Terms ``u`` with ``t ->_(level) u`` found within caps (a sound under-approximation)."""
    return {u for _, _, u in ctrs_successors(system, t, level, caps)}


def ctrs_reachable(
    system: RewriteSystem,
    t: Term,
    caps: Optional[EngineCaps] = None,
    goal: Optional[Callable[[Term], bool]] = None,
) -> DerivationGraph:
    """Bounded ``->*_R`` closure at level ``caps.max_level``."""
    return ConditionalEngine(system, caps).reachable(t, goal)


def normal_forms(graph: DerivationGraph) -> List[Term]:
    return graph.normal_forms()


def reachable_set(graphs: Iterable[DerivationGraph]) -> Set[Term]:
    out: Set[Term] = set()
    for g in graphs:
        out.update(g.nodes)
    return out
