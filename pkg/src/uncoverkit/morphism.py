"""Partial hypergraph morphisms, match enumeration, rules and NACs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import (
    ConnMismatch,
    IncidentNodeUndefined,
    LabelMismatch,
    SignatureMismatch,
    TypeMismatch,
)
from .hypergraph import Hypergraph


class PartialMorphism:
    """A pair of partial maps on nodes and edges between two hypergraphs.

    Laws (checked by :func:`check_morphism`): labels are preserved on defined
    edges, connections commute pointwise, and a morphism defined on an edge is
    defined on every node incident to it.
    """

    __slots__ = ("source", "target", "node_map", "edge_map")

    def __init__(
        self,
        source: Hypergraph,
        target: Hypergraph,
        node_map: Mapping[str, str],
        edge_map: Mapping[str, str],
    ):
        self.source = source
        self.target = target
        self.node_map = dict(node_map)
        self.edge_map = dict(edge_map)

    @classmethod
    def identity(cls, g: Hypergraph) -> "PartialMorphism":
        return cls(g, g, {v: v for v in g.nodes}, {e: e for e in g.elabel})

    def defined_on_node(self, v: str) -> bool:
        return v in self.node_map

    def defined_on_edge(self, e: str) -> bool:
        return e in self.edge_map

    def is_total(self) -> bool:
        return (
            set(self.node_map) == self.source.nodes
            and set(self.edge_map) == set(self.source.elabel)
        )

    def is_injective(self) -> bool:
        return len(set(self.node_map.values())) == len(self.node_map) and len(
            set(self.edge_map.values())
        ) == len(self.edge_map)

    def is_surjective(self) -> bool:
        return set(self.node_map.values()) == self.target.nodes and set(
            self.edge_map.values()
        ) == set(self.target.elabel)

    def inverse(self) -> "PartialMorphism":
        """Inverse of an injective morphism (partial if not surjective)."""
        if not self.is_injective():
            raise TypeMismatch("only injective morphisms can be inverted")
        return PartialMorphism(
            self.target,
            self.source,
            {w: v for v, w in self.node_map.items()},
            {f: e for e, f in self.edge_map.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.node_map == other.node_map
            and self.edge_map == other.edge_map
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        nm = ", ".join(f"{a}->{b}" for a, b in sorted(self.node_map.items()))
        em = ", ".join(f"{a}->{b}" for a, b in sorted(self.edge_map.items()))
        return f"PartialMorphism(nodes[{nm}], edges[{em}])"


def check_morphism(m: PartialMorphism) -> None:
    """Raise a MorphismError if ``m`` violates the morphism laws."""
    src, tgt = m.source, m.target
    for v, w in m.node_map.items():
        if v not in src.nodes or w not in tgt.nodes:
            raise TypeMismatch(f"node map entry {v!r}->{w!r} leaves the graphs")
    for e, f in m.edge_map.items():
        if e not in src.elabel or f not in tgt.elabel:
            raise TypeMismatch(f"edge map entry {e!r}->{f!r} leaves the graphs")
        if src.elabel[e] != tgt.elabel[f]:
            raise LabelMismatch(e)
        for v in src.conn[e]:
            if v not in m.node_map:
                raise IncidentNodeUndefined(e, v)
        mapped = tuple(m.node_map[v] for v in src.conn[e])
        if mapped != tgt.conn[f]:
            raise ConnMismatch(e)


def is_morphism(m: PartialMorphism) -> bool:
    try:
        check_morphism(m)
        return True
    except Exception:
        return False


def compose(f: PartialMorphism, g: PartialMorphism) -> PartialMorphism:
    """g after f; defined where both legs are."""
    if f.target != g.source:
        raise TypeMismatch("compose: f.target differs from g.source")
    nm = {v: g.node_map[w] for v, w in f.node_map.items() if w in g.node_map}
    em = {e: g.edge_map[x] for e, x in f.edge_map.items() if x in g.edge_map}
    return PartialMorphism(f.source, g.target, nm, em)


def is_conflict_free(m: PartialMorphism, span: PartialMorphism) -> bool:
    """Elements identified by ``m`` are uniformly preserved or deleted by ``span``."""
    by_image: dict[str, list[str]] = {}
    for v, w in m.node_map.items():
        by_image.setdefault("n" + w, []).append(v)
    for e, x in m.edge_map.items():
        by_image.setdefault("e" + x, []).append(e)
    for key, elems in by_image.items():
        if len(elems) < 2:
            continue
        if key.startswith("n"):
            flags = {x in span.node_map for x in elems}
        else:
            flags = {x in span.edge_map for x in elems}
        if len(flags) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Match enumeration (backtracking over edges first, then leftover nodes)


def _search(
    l: Hypergraph,
    g: Hypergraph,
    *,
    injective: bool = False,
) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
    edge_order = sorted(l.elabel, key=lambda e: (l.elabel[e], e))
    g_by_label: dict[str, list[str]] = {}
    for e in g.edge_ids():
        g_by_label.setdefault(g.elabel[e], []).append(e)

    node_map: dict[str, str] = {}
    edge_map: dict[str, str] = {}

    def assign_nodes(pairs: list[tuple[str, str]]) -> list[str] | None:
        added = []
        for v, w in pairs:
            if v in node_map:
                if node_map[v] != w:
                    for a in added:
                        del node_map[a]
                    return None
                continue
            if injective and w in node_map.values():
                for a in added:
                    del node_map[a]
                return None
            node_map[v] = w
            added.append(v)
        return added

    def match_edges(i: int) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
        if i == len(edge_order):
            yield from match_free_nodes()
            return
        e = edge_order[i]
        for f in g_by_label.get(l.elabel[e], ()):
            if injective and f in edge_map.values():
                continue
            if len(g.conn[f]) != len(l.conn[e]):
                continue
            added = assign_nodes(list(zip(l.conn[e], g.conn[f])))
            if added is None:
                continue
            edge_map[e] = f
            yield from match_edges(i + 1)
            del edge_map[e]
            for v in added:
                del node_map[v]

    def match_free_nodes() -> Iterator[tuple[dict[str, str], dict[str, str]]]:
        free = [v for v in sorted(l.nodes) if v not in node_map]

        def rec(j: int) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
            if j == len(free):
                yield dict(node_map), dict(edge_map)
                return
            v = free[j]
            for w in sorted(g.nodes):
                if injective and w in node_map.values():
                    continue
                node_map[v] = w
                yield from rec(j + 1)
                del node_map[v]

        yield from rec(0)

    yield from match_edges(0)


def enumerate_matches(
    l: Hypergraph,
    g: Hypergraph,
    conflict_free_wrt: "Rule | PartialMorphism | None" = None,
) -> list[PartialMorphism]:
    """All total morphisms l -> g, optionally filtered to conflict-free ones."""
    if l.signature != g.signature:
        raise SignatureMismatch("matching across different signatures")
    span = None
    if conflict_free_wrt is not None:
        span = (
            conflict_free_wrt.span
            if isinstance(conflict_free_wrt, Rule)
            else conflict_free_wrt
        )
    out = []
    for nm, em in _search(l, g):
        m = PartialMorphism(l, g, nm, em)
        if span is not None and not is_conflict_free(m, span):
            continue
        out.append(m)
    out.sort(key=lambda m: (sorted(m.node_map.items()), sorted(m.edge_map.items())))
    return out


def find_embedding(small: Hypergraph, big: Hypergraph) -> PartialMorphism | None:
    """First total injective morphism small -> big, or None."""
    if small.signature != big.signature:
        raise SignatureMismatch("embedding across different signatures")
    if len(small.nodes) > len(big.nodes) or len(small.elabel) > len(big.elabel):
        return None
    for nm, em in _search(small, big, injective=True):
        return PartialMorphism(small, big, nm, em)
    return None


def iter_embeddings(small: Hypergraph, big: Hypergraph) -> Iterator[PartialMorphism]:
    for nm, em in _search(small, big, injective=True):
        yield PartialMorphism(small, big, nm, em)


def find_isomorphism(g1: Hypergraph, g2: Hypergraph) -> PartialMorphism | None:
    """A concrete total bijective morphism g1 -> g2, or None."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.elabel) != len(g2.elabel):
        return None
    for m in iter_embeddings(g1, g2):
        return m  # same cardinalities: injective + total = bijective
    return None


# ---------------------------------------------------------------------------
# Rules and negative application conditions


@dataclass
class NAC:
    """Edge-forbidding negative application condition.

    ``pattern`` extends the rule's left-hand side by edges between nodes
    already present; ``embedding`` is the (injective, total) inclusion of the
    left-hand side into the pattern.
    """

    pattern: Hypergraph
    embedding: PartialMorphism

    def check(self) -> None:
        check_morphism(self.embedding)
        if not self.embedding.is_total() or not self.embedding.is_injective():
            raise TypeMismatch("NAC embedding must be total and injective")
        image_nodes = set(self.embedding.node_map.values())
        if image_nodes != self.pattern.nodes:
            raise TypeMismatch("NAC pattern may not add nodes")

    def extra_edges(self) -> list[str]:
        image = set(self.embedding.edge_map.values())
        return [e for e in self.pattern.edge_ids() if e not in image]


def nac_violated(m: PartialMorphism, nac: NAC) -> bool:
    """True iff ``m`` extends to the NAC pattern (the forbidden situation)."""
    g = m.target
    inv_nodes = {w: v for v, w in nac.embedding.node_map.items()}
    for e in nac.extra_edges():
        label = nac.pattern.elabel[e]
        want = tuple(m.node_map[inv_nodes[v]] for v in nac.pattern.conn[e])
        if not any(
            g.elabel[f] == label and g.conn[f] == want for f in g.elabel
        ):
            return False
    return True


def nacs_satisfied(m: PartialMorphism, nacs: list[NAC]) -> bool:
    return all(not nac_violated(m, nac) for nac in nacs)


@dataclass
class Rule:
    """A rewriting rule: a partial morphism from lhs to rhs, plus NACs."""

    name: str
    lhs: Hypergraph
    rhs: Hypergraph
    span: PartialMorphism
    nacs: list[NAC] = field(default_factory=list)

    def check(self) -> None:
        if self.span.source != self.lhs or self.span.target != self.rhs:
            raise TypeMismatch(f"rule {self.name!r}: span endpoints do not match")
        check_morphism(self.span)
        for nac in self.nacs:
            nac.check()
            if nac.embedding.source != self.lhs:
                raise TypeMismatch(f"rule {self.name!r}: NAC does not extend the lhs")

    def deleted_nodes(self) -> list[str]:
        return [v for v in sorted(self.lhs.nodes) if v not in self.span.node_map]

    def deleted_edges(self) -> list[str]:
        return [e for e in self.lhs.edge_ids() if e not in self.span.edge_map]

    def created_nodes(self) -> list[str]:
        image = set(self.span.node_map.values())
        return [v for v in sorted(self.rhs.nodes) if v not in image]

    def created_edges(self) -> list[str]:
        image = set(self.span.edge_map.values())
        return [e for e in self.rhs.edge_ids() if e not in image]
