"""Subgraph and induced-subgraph quasi-orders represented by morphism classes.

``leq(g1, g2)`` asks whether g1 embeds into g2 (with an edge-closed image in
the induced case); equivalently there is an order morphism g2 -> g1.  The
minor ordering is reserved as an extension tag and rejected everywhere.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable

from .errors import NotDirectedGraph, UnsupportedOrder
from .hypergraph import Hypergraph, canonical_key, subgraph_of
from .morphism import PartialMorphism, check_morphism, find_embedding, iter_embeddings


class OrderKind(enum.Enum):
    SUBGRAPH = "subgraph"
    INDUCED_SUBGRAPH = "induced"
    MINOR = "minor"  # parses, but every operation raises UnsupportedOrder


def _require_supported(order: OrderKind) -> None:
    if order is OrderKind.MINOR:
        raise UnsupportedOrder("the minor ordering is not implemented")


def _require_directed(g: Hypergraph, order: OrderKind) -> None:
    if order is OrderKind.INDUCED_SUBGRAPH and not g.is_directed():
        raise NotDirectedGraph("induced-subgraph order needs arity-2 edges only")


def _image_edge_closed(m: PartialMorphism) -> bool:
    """Every target edge between image nodes has a preimage."""
    image_nodes = set(m.node_map.values())
    image_edges = set(m.edge_map.values())
    for f, ns in m.target.conn.items():
        if f not in image_edges and all(v in image_nodes for v in ns):
            return False
    return True


def find_order_embedding(
    g1: Hypergraph, g2: Hypergraph, order: OrderKind
) -> PartialMorphism | None:
    """A witness embedding g1 -> g2 for ``leq``, or None."""
    _require_supported(order)
    _require_directed(g1, order)
    _require_directed(g2, order)
    if order is OrderKind.SUBGRAPH:
        return find_embedding(g1, g2)
    for m in iter_embeddings(g1, g2):
        if _image_edge_closed(m):
            return m
    return None


def leq(g1: Hypergraph, g2: Hypergraph, order: OrderKind) -> bool:
    """g1 is below g2 in the chosen order."""
    return find_order_embedding(g1, g2, order) is not None


def order_morphism_check(m: PartialMorphism, order: OrderKind) -> bool:
    """Does ``m`` witness the order, i.e. belong to its morphism class?

    Subgraph: injective where defined and surjective.  Induced subgraph:
    additionally, undefined on an edge implies undefined on at least one
    incident node.
    """
    _require_supported(order)
    check_morphism(m)
    if not m.is_injective() or not m.is_surjective():
        return False
    if order is OrderKind.INDUCED_SUBGRAPH:
        for e in m.source.elabel:
            if e in m.edge_map:
                continue
            if all(v in m.node_map for v in m.source.conn[e]):
                return False
    return True


def enumerate_order_morphisms(
    r: Hypergraph, order: OrderKind
) -> list[tuple[Hypergraph, PartialMorphism]]:
    """Every order morphism out of ``r``, one per kept element subset.

    Each is the identity on the kept elements.  Distinct subsets can yield
    isomorphic codomains while still being inequivalent as morphisms, so no
    isomorphism collapsing happens here.
    """
    _require_supported(order)
    _require_directed(r, order)
    candidates: list[tuple[frozenset[str], frozenset[str]]] = []
    all_edges = r.edge_ids()
    if order is OrderKind.SUBGRAPH:
        for k in range(len(all_edges) + 1):
            for keep_edges in itertools.combinations(all_edges, k):
                covered = {v for e in keep_edges for v in r.conn[e]}
                free = sorted(r.nodes - covered)
                for j in range(len(free) + 1):
                    for extra in itertools.combinations(free, j):
                        candidates.append(
                            (frozenset(covered) | frozenset(extra), frozenset(keep_edges))
                        )
    else:
        for j in range(len(r.nodes) + 1):
            for keep_nodes in itertools.combinations(sorted(r.nodes), j):
                keep = set(keep_nodes)
                keep_edges = frozenset(
                    e for e in all_edges if all(v in keep for v in r.conn[e])
                )
                candidates.append((frozenset(keep), keep_edges))

    out = []
    seen: set[tuple[frozenset[str], frozenset[str]]] = set()
    for keep_nodes, keep_edges in candidates:
        if (keep_nodes, keep_edges) in seen:
            continue
        seen.add((keep_nodes, keep_edges))
        rep = subgraph_of(r, keep_nodes, keep_edges)
        mu = PartialMorphism(
            r, rep, {v: v for v in keep_nodes}, {e: e for e in keep_edges}
        )
        out.append((rep, mu))
    out.sort(key=lambda pair: (sorted(pair[0].nodes), sorted(pair[0].elabel)))
    return out


def enumerate_smaller(
    r: Hypergraph, order: OrderKind
) -> list[tuple[Hypergraph, PartialMorphism]]:
    """One representative per isomorphism class of graphs below ``r``.

    Each comes with its canonical order morphism r -> rep (identity on the
    kept elements).  Output is sorted by canonical key.
    """
    by_key: dict[bytes, tuple[Hypergraph, PartialMorphism]] = {}
    for rep, mu in enumerate_order_morphisms(r, order):
        by_key.setdefault(canonical_key(rep), (rep, mu))
    return [by_key[k] for k in sorted(by_key)]


def minimize(ws: Iterable[Hypergraph], order: OrderKind) -> list[Hypergraph]:
    """The order-minimal elements of ``ws``, one per isomorphism class."""
    _require_supported(order)
    by_key = {}
    for g in ws:
        by_key.setdefault(canonical_key(g), g)
    reps = [by_key[k] for k in sorted(by_key)]
    out = []
    for g in reps:
        if any(h is not g and leq(h, g, order) for h in reps):
            continue
        out.append(g)
    return out


def upward_member(g: Hypergraph, basis: Iterable[Hypergraph], order: OrderKind) -> bool:
    """Is ``g`` in the upward closure of ``basis``?"""
    return any(leq(b, g, order) for b in basis)
