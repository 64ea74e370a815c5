"""Bounded forward exploration: validation oracle and coverability witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field

from .hypergraph import Hypergraph, canonical_key
from .morphism import PartialMorphism, Rule, enumerate_matches, nacs_satisfied
from .order import OrderKind, upward_member
from .pushout import apply_rule


@dataclass(frozen=True)
class ExploreBounds:
    max_depth: int = 6
    max_states: int = 2000
    max_nodes: int = 12
    max_edges: int = 24

    def __post_init__(self) -> None:
        if min(self.max_depth, self.max_states, self.max_nodes, self.max_edges) <= 0:
            raise ValueError("all bounds must be positive")


@dataclass
class Step:
    rule_name: str
    match_nodes: dict[str, str]
    match_edges: dict[str, str]
    result_key: bytes

    def describe(self) -> str:
        nm = ",".join(f"{a}->{b}" for a, b in sorted(self.match_nodes.items()))
        return f"{self.rule_name}[{nm}]"


@dataclass
class Witness:
    start: Hypergraph
    end: Hypergraph
    steps: list[Step] = field(default_factory=list)

    def replay(self) -> Hypergraph:
        """Re-apply the recorded steps; the result must match ``end``."""
        g = self.start
        for step in self.steps:
            rule = step._rule  # attached when the step is recorded
            m = PartialMorphism(rule.lhs, g, step.match_nodes, step.match_edges)
            g, _, _ = apply_rule(rule, m)
            assert canonical_key(g) == step.result_key
        return g


@dataclass(frozen=True)
class NotWithinBounds:
    explored: int
    truncated: bool


def successors(g: Hypergraph, rules: list[Rule]) -> list[tuple[Hypergraph, Step]]:
    """All one-step rewrites of ``g``, one representative per iso class."""
    out: dict[bytes, tuple[Hypergraph, Step]] = {}
    for rule in rules:
        for m in enumerate_matches(rule.lhs, g, conflict_free_wrt=rule):
            if not nacs_satisfied(m, rule.nacs):
                continue
            h, _, _ = apply_rule(rule, m)
            key = canonical_key(h)
            if key in out:
                continue
            step = Step(rule.name, dict(m.node_map), dict(m.edge_map), key)
            step._rule = rule  # type: ignore[attr-defined]
            out[key] = (h, step)
    return [out[k] for k in sorted(out)]


def coverable_bounded(
    g0: Hypergraph,
    f: list[Hypergraph],
    order: OrderKind,
    rules: list[Rule],
    bounds: ExploreBounds,
) -> Witness | NotWithinBounds:
    """Breadth-first search for a state covering the error basis.

    Size caps abort a branch, not the search; a NotWithinBounds result never
    claims impossibility.
    """
    if upward_member(g0, f, order):
        return Witness(g0, g0, [])
    visited = {canonical_key(g0)}
    frontier: list[tuple[Hypergraph, list[Step]]] = [(g0, [])]
    truncated = False
    explored = 1
    for _ in range(bounds.max_depth):
        next_frontier: list[tuple[Hypergraph, list[Step]]] = []
        for g, path in frontier:
            for h, step in successors(g, rules):
                if step.result_key in visited:
                    continue
                if len(h.nodes) > bounds.max_nodes or len(h.elabel) > bounds.max_edges:
                    truncated = True
                    continue
                visited.add(step.result_key)
                explored += 1
                new_path = path + [step]
                if upward_member(h, f, order):
                    return Witness(g0, h, new_path)
                if explored >= bounds.max_states:
                    truncated = True
                    return NotWithinBounds(explored, truncated)
                next_frontier.append((h, new_path))
        if not next_frontier:
            break
        frontier = next_frontier
    return NotWithinBounds(explored, truncated)
