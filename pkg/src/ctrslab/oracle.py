"""Bounded checks of soundness and completeness of the transformations.

A probe never turns cap exhaustion into a refutation: ``refuted`` needs a
concrete target term whose backtranslation the exhaustive (untruncated)
source search did not reach, or a simulation search that finished without
finding its goal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ctrslab import kernels
from ctrslab.engine import GOAL_REACHED, ConditionalEngine, DerivationGraph, EngineCaps, trs_reachable
from ctrslab.generators import enumerate_terms, random_seeds, signature_of
from ctrslab.systems import RewriteSystem, is_dctrs, is_ultra_wll, is_wll_system
from ctrslab.terms import App, Term, function_symbols, replace_at, subterm_at
from ctrslab.transforms import (
    TransformContext,
    TransformError,
    bar,
    guarded_bar,
    hat,
    linearize,
    sr_transform,
    unravel,
)

VERIFIED = "verified"
UNVERIFIED = "unverified-caps"
REFUTED = "refuted"
SKIPPED = "skipped"

OUT_OF_CLASS = "out-of-class observation"


@dataclass
class SimulationPair:
    """A source system, a transformed system and the maps between their terms."""

    source_system: RewriteSystem
    ctx: TransformContext
    phi_init: str  # "identity" or "guard-bar"
    psi_back: str  # "partial-identity" or "hat"
    name: str = ""
    in_class: bool = True

    def __post_init__(self):
        if self.phi_init not in ("identity", "guard-bar") or self.psi_back not in ("partial-identity", "hat"):
            raise ValueError("unknown mapping names")
        if (self.phi_init == "identity") != (self.psi_back == "partial-identity"):
            raise ValueError("identity initialization goes with partial-identity backtranslation")
        self._source_sig = signature_of(self.source_system)

    @property
    def target(self) -> RewriteSystem:
        return self.ctx.target

    def phi(self, t: Term) -> Term:
        return t if self.phi_init == "identity" else guarded_bar(t, self.ctx)

    def psi(self, t: Term) -> Optional[Term]:
        u = t if self.psi_back == "partial-identity" else hat(t, self.ctx)
        if u is None or not self.in_source_signature(u):
            return None
        return u

    def in_source_signature(self, t: Term) -> bool:
        sig = self._source_sig
        return all(sig.get(f) == n for f, n in function_symbols(t).items())


def unraveling_pair(system: RewriteSystem) -> SimulationPair:
    return SimulationPair(system, unravel(system), "identity", "partial-identity", "U", is_wll_system(system))


def sr_pair(system: RewriteSystem, check: bool = True) -> SimulationPair:
    ctx = sr_transform(system, check=check)
    return SimulationPair(system, ctx, "guard-bar", "hat", "SR", is_wll_system(system) and is_ultra_wll(system))


def sr_t_pair(system: RewriteSystem) -> SimulationPair:
    """SR applied to the linearization of a WLL system; terms are mapped through the source signature."""
    ctx = sr_transform(linearize(system).target)
    return SimulationPair(system, ctx, "guard-bar", "hat", "SR-T", is_wll_system(system))


@dataclass
class ProbeResult:
    name: str
    verdict: str
    caps: EngineCaps
    witness: Optional[dict] = None
    note: str = ""
    checked: int = 0  # number of target terms or steps examined
    target_truncated: bool = False

    def as_dict(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "caps": self.caps.as_dict()}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        out["checked"] = self.checked
        out["target_truncated"] = self.target_truncated
        return out


@dataclass
class CheckReport:
    probes: List[ProbeResult] = field(default_factory=list)
    caps_used: Optional[EngineCaps] = None

    @property
    def verdict(self) -> str:
        verdicts = {p.verdict for p in self.probes if p.note != OUT_OF_CLASS}
        if REFUTED in verdicts:
            return REFUTED
        if UNVERIFIED in verdicts:
            return UNVERIFIED
        return VERIFIED

    @property
    def witnesses(self) -> List[dict]:
        return [p.witness for p in self.probes if p.witness is not None]

    def extend(self, other: "CheckReport"):
        self.probes.extend(other.probes)

    def count(self, verdict: str) -> int:
        return sum(p.verdict == verdict for p in self.probes)


def derivation_json(graph: DerivationGraph, t: Term) -> List[List]:
    return [[repr(e.source), list(e.position), e.rule, repr(e.target)] for e in graph.path_to(t)]


def _finish(pair: Optional[SimulationPair], result: ProbeResult) -> ProbeResult:
    if pair is not None and not pair.in_class and result.verdict == REFUTED:
        result.note = OUT_OF_CLASS
    return result


# -- soundness ------------------------------------------------------------


def check_soundness(pair: SimulationPair, seeds: Sequence[Term], caps: Optional[EngineCaps] = None) -> CheckReport:
    """Every target term reachable from phi(s) backtranslates to a source reduct of s.

    The target side is explored breadth-first within ``caps``; each explored
    term with a defined backtranslation is checked against the bounded source
    reachable set.
    """
    caps = caps or EngineCaps.default()
    report = CheckReport(caps_used=caps)
    engine = ConditionalEngine(pair.source_system, caps)
    for s in seeds:
        name = "soundness[%s](%r)" % (pair.name, s)
        target_graph = trs_reachable(pair.target, pair.phi(s), caps)
        source_graph = engine.reachable(s)
        result = ProbeResult(name, VERIFIED, caps, target_truncated=target_graph.truncated)
        for t in target_graph.nodes:
            back = pair.psi(t)
            if back is None:
                continue
            result.checked += 1
            if back in source_graph:
                continue
            witness = {
                "seed": repr(s),
                "target": repr(t),
                "backtranslation": repr(back),
                "target_derivation": derivation_json(target_graph, t),
            }
            if source_graph.complete:
                result.verdict = REFUTED
                result.witness = witness
                break
            result.verdict = UNVERIFIED
            result.witness = witness
        report.probes.append(_finish(pair, result))
    return report


# -- completeness ---------------------------------------------------------


TargetSteps = List[Tuple[tuple, Term]]  # (position, resulting term)


class _StepSimulator:
    """Constructs target derivations that simulate source steps.

    A conditional step is rebuilt from its rule chain: the chain's first rule
    starts the evaluation, each condition's source derivation is simulated
    recursively inside the evaluation slot, and the next chain rule fires.
    Steps below the root are simulated on the redex and replayed in context;
    for guarded images the guard is then hoisted with the auxiliary rules.
    Every returned derivation is validated against the target's one-step
    relation, so a construction bug can cost a verdict but never fake one.
    """

    def __init__(self, pair: SimulationPair, caps: EngineCaps):
        self.pair = pair
        self.caps = caps
        self.ctx = pair.ctx
        self.guarded = pair.phi_init == "guard-bar"
        # linearized systems are simulated through their own rules
        self.engine = ConditionalEngine(pair.ctx.source, caps)
        self._local: Dict[Tuple[Term, Term, int], Optional[TargetSteps]] = {}

    def start(self, t: Term) -> Term:
        return bar(t, self.ctx) if self.guarded else t

    def goal(self, t: Term) -> Term:
        return self.pair.phi(t)

    def _fire(self, term: Term, label: str) -> Optional[Term]:
        for pos, lab, u in kernels.one_step(term, self.pair.target.step_index):
            if pos == () and lab == label:
                return u
        return None

    def local(self, u: Term, v: Term, level: int) -> Optional[TargetSteps]:
        """Steps from start(u) to goal(v) for a root step u -> v at ``level``."""
        key = (u, v, level)
        if key not in self._local:
            self._local[key] = self._local_uncached(u, v, level)
        return self._local[key]

    def _local_uncached(self, u: Term, v: Term, level: int) -> Optional[TargetSteps]:
        if level <= 0 or type(u) is not App:
            return None
        corr = self.ctx.rule_correspondence
        for rule in self.ctx.source.rules_by_root.get(u.fn, ()):
            sigma = kernels.match(rule.lhs, u)
            if sigma is None:
                continue
            if not rule.conditions:
                if kernels.apply_subst(rule.rhs, sigma) != v:
                    continue
                out = self._fire(self.start(u), corr[(rule.label, 1)])
                if out is None:
                    continue
                steps = [((), out)]
                if out != self.goal(v):
                    continue
                return steps
            thetas, _ = self.engine.solve(rule.conditions, sigma, level - 1)
            for theta in thetas:
                if kernels.apply_subst(rule.rhs, theta) != v:
                    continue
                steps = self._conditional(rule, theta, u, level)
                if steps is not None and steps[-1][1] == self.goal(v):
                    return steps
        return None

    def _conditional(self, rule, theta, u: Term, level: int) -> Optional[TargetSteps]:
        corr = self.ctx.rule_correspondence
        term = self.start(u)
        steps: TargetSteps = []
        if self.guarded:
            info = self.ctx.ext_symbols[self.ctx.symbol_table[rule.root]]
            rank = self.ctx.cond_meta[rule.label].rank
            slot = (info.arity + rank - 1, 0)
        else:
            slot = (0,)
        for j, (s, t) in enumerate(rule.conditions, 1):
            term = self._fire(term, corr[(rule.label, j)])
            if term is None:
                return None
            steps.append(((), term))
            path = self.engine.derivation(kernels.apply_subst(s, theta), kernels.apply_subst(t, theta), level - 1)
            if path is None:
                return None
            inner = self.derivation(path, level - 1)
            if inner is None:
                return None
            term = self._replay(term, slot, inner, steps)
        term = self._fire(term, corr[(rule.label, len(rule.conditions) + 1)])
        if term is None:
            return None
        steps.append(((), term))
        return steps

    @staticmethod
    def _replay(term: Term, offset: tuple, inner: TargetSteps, steps: TargetSteps) -> Term:
        for q, t in inner:
            term = replace_at(term, offset, t)
            steps.append((offset + q, term))
        return term

    def derivation(self, path, level: int) -> Optional[TargetSteps]:
        """Steps from phi(x0) to phi(xm) for a source derivation given as edges."""
        steps: TargetSteps = []
        for e in path:
            part = self.step(e.source, e.position, e.target, level)
            if part is None:
                return None
            steps.extend(part)
        return steps

    def step(self, u: Term, pos: tuple, v: Term, level: int) -> Optional[TargetSteps]:
        pos = tuple(pos)
        local = self.local(subterm_at(u, pos), subterm_at(v, pos), level)
        if local is None:
            return None
        steps: TargetSteps = []
        offset = ((0,) + pos) if self.guarded else pos
        term = self._replay(self.pair.phi(u), offset, local, steps)
        if self.guarded:
            term = self._hoist(term, offset, steps)
        return steps if term == self.pair.phi(v) else None

    def _hoist(self, term: Term, offset: tuple, steps: TargetSteps) -> Term:
        ctx = self.ctx
        for k in range(len(offset) - 1, -1, -1):
            at = offset[:k]
            parent = subterm_at(term, at)
            child = parent.args[offset[k]]
            if parent.fn == ctx.guard:
                hoisted = child  # <<x>> -> <x>
            else:
                args = list(parent.args)
                args[offset[k]] = child.args[0]
                info = ctx.ext_symbols.get(parent.fn)
                if info is not None:
                    args = args[: info.arity] + [App(ctx.bottom, ())] * info.extra
                hoisted = App(ctx.guard, [App(parent.fn, args)])
            term = replace_at(term, at, hoisted)
            steps.append((at, term))
        return term


def validate_steps(system: RewriteSystem, start: Term, steps: TargetSteps) -> bool:
    """Whether each recorded step is a genuine one-step rewrite of the target system."""
    term = start
    for pos, nxt in steps:
        if not any(p == pos and u == nxt for p, _, u in kernels.one_step(term, system.step_index)):
            return False
        term = nxt
    return True


def _simulate_step(sim: _StepSimulator, u: Term, pos, v: Term, caps: EngineCaps) -> Tuple[str, int]:
    """Verdict and derivation length for simulating the source step u ->_pos v."""
    pair = sim.pair
    steps = sim.step(u, pos, v, caps.max_level)
    if steps is not None and validate_steps(pair.target, pair.phi(u), steps):
        return VERIFIED, len(steps)
    goal = pair.phi(v)
    g = trs_reachable(pair.target, pair.phi(u), caps, goal=lambda t: t == goal)
    if g.status == GOAL_REACHED:
        return VERIFIED, len(g.path_to(goal))
    return (REFUTED if g.complete else UNVERIFIED), 0


def check_completeness(
    pair: SimulationPair,
    seeds: Sequence[Term],
    caps: Optional[EngineCaps] = None,
    step_caps: Optional[EngineCaps] = None,
) -> CheckReport:
    """Each source step u -> v reachable from a seed is simulated: phi(u) ->* phi(v).

    Steps are checked one at a time: a simulating derivation is constructed
    from the source engine's condition derivations and validated step by
    step; failing that, a breadth-first search bounded by ``step_caps``
    (defaults to ``caps``) looks for phi(v).
    """
    caps = caps or EngineCaps.default()
    step_caps = step_caps or caps
    report = CheckReport(caps_used=caps)
    engine = ConditionalEngine(pair.source_system, caps)
    sim = _StepSimulator(pair, step_caps)
    done: Dict[Tuple[Term, tuple, Term], str] = {}
    for s in seeds:
        name = "completeness[%s](%r)" % (pair.name, s)
        source_graph = engine.reachable(s)
        result = ProbeResult(name, VERIFIED, caps, target_truncated=source_graph.truncated)
        for e in source_graph.edges:
            key = (e.source, e.position, e.target)
            if key not in done:
                done[key] = _simulate_step(sim, e.source, e.position, e.target, step_caps)[0]
            result.checked += 1
            verdict = done[key]
            if verdict != VERIFIED:
                result.witness = {
                    "seed": repr(s),
                    "step": [repr(e.source), list(e.position), e.rule, repr(e.target)],
                    "goal": repr(pair.phi(e.target)),
                }
                result.verdict = verdict
                if verdict == REFUTED:
                    break
        report.probes.append(_finish(pair, result))
    return report


# -- linearization equivalence ------------------------------------------


def check_t_equivalence(system: RewriteSystem, seeds: Sequence[Term], caps: Optional[EngineCaps] = None) -> CheckReport:
    """Bounded reachable sets under R and its linearization agree on source-signature terms."""
    caps = caps or EngineCaps(max_steps=4)
    report = CheckReport(caps_used=caps)
    lin = linearize(system)
    sig = signature_of(system)

    def source_only(g: DerivationGraph):
        return {t for t in g.nodes if all(sig.get(f) == n for f, n in function_symbols(t).items())}

    src_engine = ConditionalEngine(system, caps)
    lin_engine = ConditionalEngine(lin.target, caps)
    for s in seeds:
        a = src_engine.reachable(s)
        b = lin_engine.reachable(s)
        ra, rb = source_only(a), source_only(b)
        result = ProbeResult("t-equivalence(%r)" % (s,), VERIFIED, caps, checked=len(ra | rb))
        result.target_truncated = b.truncated
        if ra != rb:
            only_a = sorted(map(repr, ra - rb))
            only_b = sorted(map(repr, rb - ra))
            result.witness = {"seed": repr(s), "only_source": only_a, "only_linearized": only_b}
            # depth bounds apply to the two systems identically, so a
            # difference is conclusive only when neither search hit a node
            # or size cap
            exhaustive = not src_engine.truncated and not lin_engine.truncated
            result.verdict = REFUTED if exhaustive else UNVERIFIED
        report.probes.append(result)
    return report


# -- the iff theorem ------------------------------------------------------


def check_iff_theorem(system: RewriteSystem) -> bool:
    """U-WLL of R coincides with WLL of its SR image (built without the U-WLL gate)."""
    return is_ultra_wll(system) == is_wll_system(sr_transform(system, check=False).target)


# -- batch driver ---------------------------------------------------------


@dataclass
class CorpusConfig:
    caps: EngineCaps = field(default_factory=lambda: EngineCaps(max_steps=12, max_nodes=4000, max_level=3))
    t_caps: EngineCaps = field(default_factory=lambda: EngineCaps(max_steps=4, max_nodes=4000, max_level=3))
    seeds_per_system: int = 4
    seed_depth: int = 2
    random_seed: int = 0
    checks: Tuple[str, ...] = ("iff", "soundness", "completeness", "t-equiv")


def default_seeds(system: RewriteSystem, n: int, depth: int = 2, random_seed: int = 0) -> List[Term]:
    """Ground seed terms rooted by defined symbols, enumerated first and padded with random ones."""
    defined = system.defined_symbols
    picked = [t for t in enumerate_terms(signature_of(system), depth, limit=500) if t.fn in defined]
    rng = random.Random(random_seed)
    if len(picked) > n:
        picked = sorted(rng.sample(picked, n), key=repr)
    for t in random_seeds(system, 2 * n, seed=random_seed, max_depth=depth + 1):
        if len(picked) >= n:
            break
        if t not in picked:
            picked.append(t)
    return picked


def _probe_skip(name: str, reason: str, caps: EngineCaps) -> ProbeResult:
    return ProbeResult(name, SKIPPED, caps, note=reason)


def run_corpus(
    systems: Sequence[Tuple[str, RewriteSystem]],
    config: Optional[CorpusConfig] = None,
    progress: Optional[Callable[[str], None]] = None,
) -> Dict[str, CheckReport]:
    """Run every applicable check on every system; inapplicable ones are skipped with a reason."""
    config = config or CorpusConfig()
    out: Dict[str, CheckReport] = {}
    for sys_name, system in systems:
        if progress:
            progress(sys_name)
        report = CheckReport(caps_used=config.caps)
        out[sys_name] = report
        caps = config.caps
        if not is_dctrs(system):
            report.probes.append(_probe_skip("all", "system is not deterministic", caps))
            continue
        wll, uwll = is_wll_system(system), is_ultra_wll(system)
        seeds = default_seeds(system, config.seeds_per_system, config.seed_depth, config.random_seed)
        if "iff" in config.checks:
            ok = check_iff_theorem(system)
            report.probes.append(ProbeResult("iff", VERIFIED if ok else REFUTED, caps))
        pairs = []
        if wll:
            pairs.append(unraveling_pair(system))
        else:
            report.probes.append(_probe_skip("U", "U soundness requires WLL", caps))
        if uwll:
            pairs.append(sr_pair(system))
        else:
            report.probes.append(_probe_skip("SR", "SR requires U-WLL", caps))
        if wll and not uwll:
            pairs.append(sr_t_pair(system))
        for pair in pairs:
            if "soundness" in config.checks:
                if pair.in_class:
                    report.extend(check_soundness(pair, seeds, caps))
                else:
                    report.probes.append(_probe_skip("soundness[%s]" % pair.name, "soundness needs WLL", caps))
            if "completeness" in config.checks:
                report.extend(check_completeness(pair, seeds, caps))
        if "t-equiv" in config.checks:
            if wll:
                report.extend(check_t_equivalence(system, seeds, config.t_caps))
            else:
                report.probes.append(_probe_skip("t-equivalence", "linearization requires WLL", caps))
    return out


__all__ = [
    "CheckReport",
    "CorpusConfig",
    "OUT_OF_CLASS",
    "ProbeResult",
    "REFUTED",
    "SKIPPED",
    "SimulationPair",
    "TransformError",
    "UNVERIFIED",
    "VERIFIED",
    "check_completeness",
    "check_iff_theorem",
    "check_soundness",
    "check_t_equivalence",
    "default_seeds",
    "run_corpus",
    "sr_pair",
    "sr_t_pair",
    "unraveling_pair",
]
