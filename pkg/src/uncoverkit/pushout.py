"""Pushouts of partial hypergraph morphisms and SPO rule application."""

from __future__ import annotations

from .errors import NacViolated, NotConflictFree, TypeMismatch
from .hypergraph import Hypergraph
from .morphism import (
    PartialMorphism,
    Rule,
    is_conflict_free,
    nac_violated,
)


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def add(self, x) -> None:
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def pushout(
    f: PartialMorphism, g: PartialMorphism
) -> tuple[Hypergraph, PartialMorphism, PartialMorphism]:
    """Pushout of a span f: G0 -> G1, g: G0 -> G2 of partial morphisms.

    Glue G1 and G2 along G0 and drop every equivalence class that contains the
    image of an element on which the other leg is undefined; edge classes also
    need all their endpoint classes to survive.  Returns (G3, f*, g*) with
    f*: G1 -> G3 and g*: G2 -> G3 such that f* . f = g* . g.
    """
    if f.source != g.source:
        raise TypeMismatch("pushout legs must share their source")
    g0, g1, g2 = f.source, f.target, g.target

    nodes = _UnionFind()
    edges = _UnionFind()
    for v in g1.nodes:
        nodes.add(("a", v))
    for v in g2.nodes:
        nodes.add(("b", v))
    for e in g1.elabel:
        edges.add(("a", e))
    for e in g2.elabel:
        edges.add(("b", e))

    for v in g0.nodes:
        fv, gv = f.node_map.get(v), g.node_map.get(v)
        if fv is not None and gv is not None:
            nodes.union(("a", fv), ("b", gv))
    for e in g0.elabel:
        fe, ge = f.edge_map.get(e), g.edge_map.get(e)
        if fe is not None and ge is not None:
            edges.union(("a", fe), ("b", ge))

    invalid_nodes: set = set()
    invalid_edges: set = set()
    for v in g0.nodes:
        fv, gv = f.node_map.get(v), g.node_map.get(v)
        if fv is not None and gv is None:
            invalid_nodes.add(nodes.find(("a", fv)))
        if gv is not None and fv is None:
            invalid_nodes.add(nodes.find(("b", gv)))
    for e in g0.elabel:
        fe, ge = f.edge_map.get(e), g.edge_map.get(e)
        if fe is not None and ge is None:
            invalid_edges.add(edges.find(("a", fe)))
        if ge is not None and fe is None:
            invalid_edges.add(edges.find(("b", ge)))

    node_classes = nodes.classes()
    edge_classes = edges.classes()

    def conn_of(member) -> tuple:
        side, e = member
        graph = g1 if side == "a" else g2
        return tuple(nodes.find((side, v)) for v in graph.conn[e])

    def label_of(member) -> str:
        side, e = member
        return (g1 if side == "a" else g2).elabel[e]

    # an edge class dies if marked invalid or any endpoint class died
    surviving_edges = {}
    for root, members in edge_classes.items():
        if root in invalid_edges:
            continue
        if any(r in invalid_nodes for r in conn_of(members[0])):
            continue
        surviving_edges[root] = members

    # deterministic class names, ordered by sorted member lists
    def class_name(prefix: str, members: list) -> tuple:
        return tuple(sorted(members))

    node_named = {
        root: class_name("n", members)
        for root, members in node_classes.items()
        if root not in invalid_nodes
    }
    node_ids = {
        root: f"n{i}" for i, root in enumerate(sorted(node_named, key=node_named.get))
    }
    edge_named = {
        root: class_name("e", members) for root, members in surviving_edges.items()
    }
    edge_ids = {
        root: f"e{i}" for i, root in enumerate(sorted(edge_named, key=edge_named.get))
    }

    emap = {}
    for root, members in surviving_edges.items():
        rep = members[0]
        label = label_of(rep)
        for other in members[1:]:
            if label_of(other) != label or conn_of(other) != conn_of(rep):
                raise TypeMismatch("pushout legs are not valid morphisms")
        emap[edge_ids[root]] = (label, tuple(node_ids[r] for r in conn_of(rep)))
    g3 = Hypergraph(g1.signature, set(node_ids.values()), emap)

    def leg(side: str, graph: Hypergraph) -> PartialMorphism:
        nm = {}
        for v in graph.nodes:
            root = nodes.find((side, v))
            if root in node_ids:
                nm[v] = node_ids[root]
        em = {}
        for e in graph.elabel:
            root = edges.find((side, e))
            if root in edge_ids:
                em[e] = edge_ids[root]
        return PartialMorphism(graph, g3, nm, em)

    return g3, leg("a", g1), leg("b", g2)


def apply_rule(
    rule: Rule, m: PartialMorphism
) -> tuple[Hypergraph, PartialMorphism, PartialMorphism]:
    """Single-pushout rewriting step.

    ``m`` must be a total, conflict-free match of the rule's left-hand side;
    node deletion removes all incident edges.  Returns (H, comatch, corule)
    where the comatch rhs -> H is total and the corule G -> H is partial.
    """
    if m.source != rule.lhs:
        raise TypeMismatch(f"match is not on the lhs of rule {rule.name!r}")
    if not m.is_total():
        raise TypeMismatch("matches must be total")
    if not is_conflict_free(m, rule.span):
        raise NotConflictFree(f"match is not conflict-free wrt rule {rule.name!r}")
    for i, nac in enumerate(rule.nacs):
        if nac_violated(m, nac):
            raise NacViolated(i)
    h, comatch, corule = pushout(rule.span, m)
    assert comatch.is_total(), "conflict-free matches yield total comatches"
    return h, comatch, corule
