"""Backward reachability: rule preparation, fixed-point iteration, verdicts.

The working set starts from the error basis and grows by adding minimal
pushout complements under every prepared rule and co-match, minimizing after
each step; the sequence of upward closures is monotone and the run stops when
it becomes stationary (or the iteration budget runs out).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import ModelError, NotDirectedGraph
from .hypergraph import Hypergraph, RestrictionSpec, canonical_key, in_restriction
from .morphism import PartialMorphism, Rule, compose, enumerate_matches, iter_embeddings
from .order import (
    OrderKind,
    enumerate_order_morphisms,
    minimize,
    order_morphism_check,
    upward_member,
)
from .poc import PocRequest, minimal_pushout_complements

DEFAULT_MAX_ITERATIONS = 1000
DEFAULT_TRACE_GRAPH_CAP = 256


@dataclass
class AnalysisProblem:
    rules: list[Rule]
    order: OrderKind
    variant: int
    restriction: RestrictionSpec
    error_basis: list[Hypergraph]
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    initial_graphs: list[Hypergraph] = field(default_factory=list)
    q_closed_under_reachability: bool = False  # user-asserted, never inferred

    def validate(self) -> None:
        if not self.error_basis:
            raise ModelError("the error basis must be non-empty")
        if self.variant not in (1, 2):
            raise ModelError("variant must be 1 or 2")
        if self.variant == 1 and self.restriction.kind == "all":
            raise ModelError("variant 1 needs a proper restriction")
        if self.variant == 2 and self.restriction.kind != "all":
            raise ModelError("variant 2 ignores restrictions; use 'none'")
        if self.order is OrderKind.INDUCED_SUBGRAPH:
            if self.variant != 1 or self.restriction.kind != "pathmult":
                raise ModelError(
                    "the induced-subgraph order needs variant 1 with a "
                    "path+multiplicity bound"
                )
            for g in self.error_basis + self.initial_graphs:
                if not g.is_directed():
                    raise NotDirectedGraph(
                        "induced-subgraph order needs arity-2 edges only"
                    )
            for r in self.rules:
                if not (r.lhs.is_directed() and r.rhs.is_directed()):
                    raise NotDirectedGraph(
                        f"rule {r.name!r} uses non-binary edges under the "
                        "induced-subgraph order"
                    )
        if self.order is OrderKind.SUBGRAPH and self.variant == 1:
            if self.restriction.kind != "path":
                raise ModelError("variant 1 with the subgraph order needs a path bound")
        if self.variant == 1:
            for g in self.error_basis:
                if not in_restriction(g, self.restriction):
                    raise ModelError("error basis graphs must lie in the restriction")


@dataclass
class IterationRecord:
    iteration: int
    basis_size: int
    changed: bool
    keys: list[bytes]
    graphs: list[Hypergraph] | None  # None once past the memory cap


@dataclass
class BasisResult:
    basis: list[Hypergraph]
    converged: bool
    iterations: int
    trace: list[IterationRecord]

    @property
    def effective_iterations(self) -> int:
        return sum(1 for rec in self.trace if rec.changed and rec.iteration > 0)


@dataclass(frozen=True)
class Verdict:
    tag: str  # GeneralCoverable | NotRestrictedCoverable | NotCoverable | UnknownNotConverged
    witness_iteration: int | None = None


def _span_isomorphic(r1: Rule, r2: Rule) -> bool:
    """Same composed rule up to an isomorphism of right-hand sides.

    Both rules share their left-hand side; they are interchangeable iff some
    isomorphism of the right-hand sides commutes with the spans.
    """
    if r1.lhs != r2.lhs:
        return False
    a, b = r1.rhs, r2.rhs
    if len(a.nodes) != len(b.nodes) or len(a.elabel) != len(b.elabel):
        return False
    if canonical_key(a) != canonical_key(b):
        return False
    s1, s2 = r1.span, r2.span
    if set(s1.node_map) != set(s2.node_map) or set(s1.edge_map) != set(s2.edge_map):
        return False
    for iso in iter_embeddings(a, b):
        if all(iso.node_map[s1.node_map[x]] == s2.node_map[x] for x in s1.node_map) and all(
            iso.edge_map[s1.edge_map[x]] == s2.edge_map[x] for x in s1.edge_map
        ):
            return True
    return False


def prepare_rules(
    rules: list[Rule], order: OrderKind, drop_order_morphisms: bool = True
) -> list[Rule]:
    """Compose every rule with the order morphisms of its right-hand side.

    Composites are deduplicated up to span isomorphism (isomorphic targets
    alone are not enough: the same target class can be reached by morphisms
    that keep different parts of the right-hand side).  Composites whose span
    is itself an order morphism are dropped: their backward application only
    yields graphs that are already represented.
    """
    prepared: list[Rule] = []
    for rule in rules:
        kept: list[Rule] = []
        for smaller, mu in enumerate_order_morphisms(rule.rhs, order):
            span = compose(rule.span, mu)
            if drop_order_morphisms and order_morphism_check(span, order):
                continue
            composite = Rule(
                f"{rule.name}@{len(kept)}", rule.lhs, smaller, span, rule.nacs
            )
            if any(_span_isomorphic(composite, k) for k in kept):
                continue
            kept.append(composite)
        prepared.extend(kept)
    return prepared


def _worker_count() -> int:
    raw = os.environ.get("UNCOVERKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def backward_step(
    w: list[Hypergraph],
    prepared: list[Rule],
    order: OrderKind,
    variant: int,
    restriction: RestrictionSpec,
) -> list[Hypergraph]:
    """One backward step: union all minimal pushout complements, minimize."""
    items = []
    for g in sorted(w, key=canonical_key):
        for rule in prepared:
            for comatch in enumerate_matches(rule.rhs, g):
                items.append((rule, comatch))

    def solve(item):
        rule, comatch = item
        req = PocRequest(rule, comatch, order, variant, restriction)
        return minimal_pushout_complements(req).graphs()

    workers = _worker_count()
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, items))
    else:
        results = [solve(item) for item in items]

    collected = list(w)
    for graphs in results:
        collected.extend(graphs)
    return minimize(collected, order)


def run(
    problem: AnalysisProblem, trace_graph_cap: int = DEFAULT_TRACE_GRAPH_CAP
) -> BasisResult:
    """Iterate backward steps until the working set is stationary.

    Never loops silently: the iteration budget turns potential divergence
    (possible under variant 2) into a partial result with converged=False.
    Trace records keep full graphs only up to ``trace_graph_cap`` per
    iteration; beyond that only canonical keys and counts remain.
    """
    problem.validate()
    prepared = prepare_rules(problem.rules, problem.order)
    w = minimize(problem.error_basis, problem.order)
    trace: list[IterationRecord] = []

    def record(iteration: int, current: list[Hypergraph], changed: bool) -> None:
        keys = sorted(canonical_key(g) for g in current)
        keep = current if len(current) <= trace_graph_cap else None
        trace.append(IterationRecord(iteration, len(current), changed, keys, keep))

    record(0, w, True)
    converged = False
    iterations = 0
    while iterations < problem.max_iterations:
        new = backward_step(w, prepared, problem.order, problem.variant, problem.restriction)
        iterations += 1
        stationary = all(upward_member(g, w, problem.order) for g in new)
        record(iterations, new, not stationary)
        w = new
        if stationary:
            converged = True
            break
    return BasisResult(basis=w, converged=converged, iterations=iterations, trace=trace)


def decide_cover(
    g0: Hypergraph, result: BasisResult, problem: AnalysisProblem
) -> Verdict:
    """Coverability verdict for a start graph, per the convergence status.

    Converged variant 2 decides coverability outright; converged variant 1
    separates general coverability (member) from restricted non-coverability
    (non-member).  Without convergence, membership in any recorded working set
    already proves coverability.
    """
    member = upward_member(g0, result.basis, problem.order)
    if result.converged:
        if member:
            return Verdict("GeneralCoverable", _first_witness_iteration(g0, result, problem))
        if problem.variant == 2:
            return Verdict("NotCoverable")
        if problem.q_closed_under_reachability and in_restriction(g0, problem.restriction):
            # user asserted Q is closed under reachability: runs from g0 stay
            # in Q, so restricted non-coverability is plain non-coverability
            return Verdict("NotCoverable")
        return Verdict("NotRestrictedCoverable")
    if member:
        return Verdict("GeneralCoverable", _first_witness_iteration(g0, result, problem))
    return Verdict("UnknownNotConverged")


def _first_witness_iteration(
    g0: Hypergraph, result: BasisResult, problem: AnalysisProblem
) -> int:
    for rec in result.trace:
        if rec.graphs is not None and upward_member(g0, rec.graphs, problem.order):
            return rec.iteration
    return result.iterations
