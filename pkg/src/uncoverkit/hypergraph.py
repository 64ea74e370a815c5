"""Finite labelled hypergraphs with ordered edge connections.

States of the analysed transition systems are hypergraphs: a finite node set,
a finite edge set, a label per edge and an ordered node sequence per edge whose
length is fixed by the label's arity.  Everything here is immutable after
construction and safe to share.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    ArityMismatch,
    DanglingEndpoint,
    NotDirectedGraph,
    SignatureMismatch,
    UnknownLabel,
)


class Signature:
    """Finite edge alphabet assigning an arity to every label."""

    __slots__ = ("_arities",)

    def __init__(self, arities: Mapping[str, int] | Iterable[tuple[str, int]]):
        items = dict(arities)
        if not items:
            raise ValueError("a signature needs at least one edge label")
        for label, arity in items.items():
            if not isinstance(label, str):
                raise TypeError(f"label {label!r} is not a string")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"label {label!r}: arity must be a natural number")
        self._arities = items

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._arities)

    def arity(self, label: str) -> int:
        return self._arities[label]

    def __contains__(self, label: str) -> bool:
        return label in self._arities

    def is_directed(self) -> bool:
        """True iff every label is binary (directed-graph discipline)."""
        return all(a == 2 for a in self._arities.values())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._arities == other._arities

    def __hash__(self) -> int:
        return hash(frozenset(self._arities.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{l}/{a}" for l, a in sorted(self._arities.items()))
        return f"Signature({inner})"


class Hypergraph:
    """Immutable labelled hypergraph.

    ``conn`` maps each edge id to the ordered tuple of its endpoint node ids;
    ``elabel`` maps each edge id to its label.  Identifiers are opaque strings,
    unique per graph.  Construction normalises but does not validate; call
    :func:`validate` to check the invariants.
    """

    __slots__ = ("signature", "nodes", "elabel", "conn", "_ckey")

    def __init__(
        self,
        signature: Signature,
        nodes: Iterable[str] = (),
        edges: Mapping[str, tuple[str, Sequence[str]]] | None = None,
    ):
        self.signature = signature
        self.nodes = frozenset(nodes)
        elabel: dict[str, str] = {}
        conn: dict[str, tuple[str, ...]] = {}
        for eid, (label, endpoints) in (edges or {}).items():
            elabel[eid] = label
            conn[eid] = tuple(endpoints)
        self.elabel = elabel
        self.conn = conn
        self._ckey: bytes | None = None

    @classmethod
    def build(cls, signature: Signature, nodes: str | Iterable[str] = (),
              edges: Iterable[tuple] = ()) -> "Hypergraph":
        """Convenience constructor: ``edges`` items are (id, label, *endpoints)."""
        if isinstance(nodes, str):
            nodes = nodes.split()
        emap = {e[0]: (e[1], tuple(e[2:])) for e in edges}
        return cls(signature, nodes, emap)

    @property
    def edges(self) -> frozenset[str]:
        return frozenset(self.elabel)

    def edge_ids(self) -> list[str]:
        return sorted(self.elabel)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def edge_label(self, e: str) -> str:
        return self.elabel[e]

    def edge_conn(self, e: str) -> tuple[str, ...]:
        return self.conn[e]

    def incident_edges(self, v: str) -> list[str]:
        return sorted(e for e, ns in self.conn.items() if v in ns)

    def is_directed(self) -> bool:
        return all(len(ns) == 2 for ns in self.conn.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.nodes == other.nodes
            and self.elabel == other.elabel
            and self.conn == other.conn
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        es = ", ".join(
            f"{e}:{self.elabel[e]}({','.join(self.conn[e])})" for e in self.edge_ids()
        )
        return f"Hypergraph(nodes={sorted(self.nodes)}, edges=[{es}])"


def validate(g: Hypergraph) -> None:
    """Check the hypergraph invariants; raise a GraphError on the first failure."""
    for e in g.edge_ids():
        label = g.elabel[e]
        if label not in g.signature:
            raise UnknownLabel(e, label)
        expected = g.signature.arity(label)
        endpoints = g.conn[e]
        if len(endpoints) != expected:
            raise ArityMismatch(e, expected, len(endpoints))
        for v in endpoints:
            if v not in g.nodes:
                raise DanglingEndpoint(e, v)


def is_valid(g: Hypergraph) -> bool:
    try:
        validate(g)
        return True
    except Exception:
        return False


# ---------------------------------------------------------------------------
# Canonical form and isomorphism


def _refine_colors(g: Hypergraph) -> dict[str, int]:
    """Iterative color refinement on nodes; colors are iso-invariant."""
    colors = {v: 0 for v in g.nodes}
    # occurrence signature of v: every (label, position, colors of the edge's
    # endpoint sequence) in which v occurs
    while True:
        sigs = {}
        for v in g.nodes:
            occ = []
            for e, ns in g.conn.items():
                for i, w in enumerate(ns):
                    if w == v:
                        occ.append((g.elabel[e], i, tuple(colors[u] for u in ns)))
            occ.sort()
            sigs[v] = (colors[v], tuple(occ))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs.values())))}
        new = {v: ranking[sigs[v]] for v in g.nodes}
        if new == colors:
            return colors
        colors = new


def canonical_key(g: Hypergraph) -> bytes:
    """Canonical form: equal keys exactly for isomorphic graphs.

    Color-refine the nodes, then take the lexicographically least edge
    relation over all node orderings compatible with the color classes.
    Keys are not stable across versions of this module.
    """
    if g._ckey is not None:
        return g._ckey
    colors = _refine_colors(g)
    classes: dict[int, list[str]] = {}
    for v, c in colors.items():
        classes.setdefault(c, []).append(v)
    ordered_classes = [sorted(classes[c]) for c in sorted(classes)]

    best: tuple | None = None
    for perm_combo in itertools.product(
        *(itertools.permutations(cl) for cl in ordered_classes)
    ):
        index: dict[str, int] = {}
        for cl in perm_combo:
            for v in cl:
                index[v] = len(index)
        rel = sorted(
            (g.elabel[e], tuple(index[v] for v in ns)) for e, ns in g.conn.items()
        )
        cand = (len(g.nodes), tuple(rel))
        if best is None or cand < best:
            best = cand
    if best is None:  # empty node set; arity-0 edges may remain
        rel = sorted((g.elabel[e], ()) for e in g.elabel)
        best = (0, tuple(rel))
    key = repr(best).encode()
    g._ckey = key
    return key


def isomorphic(g1: Hypergraph, g2: Hypergraph) -> bool:
    """True iff a total bijective morphism g1 -> g2 exists."""
    if g1.signature != g2.signature:
        raise SignatureMismatch(f"{g1.signature} vs {g2.signature}")
    if len(g1.nodes) != len(g2.nodes) or len(g1.elabel) != len(g2.elabel):
        return False
    return canonical_key(g1) == canonical_key(g2)


# ---------------------------------------------------------------------------
# Path and multiplicity metrics


def longest_undirected_path(g: Hypergraph) -> int:
    """Length (edge count) of the longest elementary undirected path.

    A path alternates nodes and edges, with consecutive nodes both incident
    to the edge between them; nodes and edges each occur at most once.  Edges
    incident to fewer than two distinct nodes can never appear.
    """
    # adjacency: v -> [(edge, other node)]
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.nodes}
    for e, ns in g.conn.items():
        distinct = sorted(set(ns))
        for v, w in itertools.permutations(distinct, 2):
            adj[v].append((e, w))

    best = 0

    def walk(v: str, used_nodes: set[str], used_edges: set[str], length: int) -> None:
        nonlocal best
        best = max(best, length)
        for e, w in adj[v]:
            if e in used_edges or w in used_nodes:
                continue
            used_nodes.add(w)
            used_edges.add(e)
            walk(w, used_nodes, used_edges, length + 1)
            used_nodes.discard(w)
            used_edges.discard(e)

    for v in g.nodes:
        walk(v, {v}, set(), 0)
    return best


def max_parallel_multiplicity(g: Hypergraph) -> int:
    """Largest number of same-label edges sharing one ordered endpoint pair."""
    counts: dict[tuple, int] = {}
    for e, ns in g.conn.items():
        if len(ns) != 2:
            raise NotDirectedGraph(f"edge {e!r} has arity {len(ns)}")
        key = (g.elabel[e], ns)
        counts[key] = counts.get(key, 0) + 1
    return max(counts.values(), default=0) if counts else 0


# ---------------------------------------------------------------------------
# Restriction sets


@dataclass(frozen=True)
class RestrictionSpec:
    """The graph set Q the analysis may confine itself to.

    ``all``: every graph.  ``path``: undirected path length bounded by
    ``path_bound``.  ``pathmult``: additionally at most ``mult_bound`` parallel
    same-label edges between any ordered node pair (directed graphs only).
    """

    kind: str  # "all" | "path" | "pathmult"
    path_bound: int | None = None
    mult_bound: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "all":
            if self.path_bound is not None or self.mult_bound is not None:
                raise ValueError("'all' takes no bounds")
        elif self.kind == "path":
            if self.path_bound is None or self.path_bound < 0:
                raise ValueError("path bound must be a natural number")
        elif self.kind == "pathmult":
            if self.path_bound is None or self.path_bound < 0:
                raise ValueError("path bound must be a natural number")
            if self.mult_bound is None or self.mult_bound < 1:
                raise ValueError("multiplicity bound must be >= 1")
        else:
            raise ValueError(f"unknown restriction kind {self.kind!r}")

    @classmethod
    def all_graphs(cls) -> "RestrictionSpec":
        return cls("all")

    @classmethod
    def path(cls, k: int) -> "RestrictionSpec":
        return cls("path", path_bound=k)

    @classmethod
    def path_mult(cls, n: int, k: int) -> "RestrictionSpec":
        return cls("pathmult", path_bound=n, mult_bound=k)

    def describe(self) -> str:
        if self.kind == "all":
            return "none"
        if self.kind == "path":
            return f"path <= {self.path_bound}"
        return f"path <= {self.path_bound}, multiplicity <= {self.mult_bound}"


def in_restriction(g: Hypergraph, q: RestrictionSpec) -> bool:
    """Membership in the restriction set; decidable by construction."""
    if q.kind == "all":
        return True
    if q.kind == "path":
        return longest_undirected_path(g) <= q.path_bound
    # pathmult: directed-graph discipline required
    mult = max_parallel_multiplicity(g)  # raises NotDirectedGraph on hyperedges
    return mult <= q.mult_bound and longest_undirected_path(g) <= q.path_bound


# ---------------------------------------------------------------------------
# Small structural helpers used across the engine


def subgraph_of(g: Hypergraph, nodes: Iterable[str], edges: Iterable[str]) -> Hypergraph:
    """The sub-hypergraph on the given element sets (caller keeps them closed)."""
    keep_e = {e: (g.elabel[e], g.conn[e]) for e in edges}
    return Hypergraph(g.signature, set(nodes), keep_e)


def renamed(g: Hypergraph, node_names: Mapping[str, str], edge_names: Mapping[str, str]) -> Hypergraph:
    emap = {
        edge_names[e]: (g.elabel[e], tuple(node_names[v] for v in g.conn[e]))
        for e in g.elabel
    }
    return Hypergraph(g.signature, {node_names[v] for v in g.nodes}, emap)


def normalized(g: Hypergraph) -> tuple[Hypergraph, dict[str, str], dict[str, str]]:
    """Rename elements to v0..vn / e0..em in sorted-id order.

    Returns the renamed graph plus the node and edge renaming maps.
    """
    nmap = {v: f"v{i}" for i, v in enumerate(g.node_ids())}
    emap = {e: f"e{i}" for i, e in enumerate(g.edge_ids())}
    return renamed(g, nmap, emap), nmap, emap


def disjoint_union(g1: Hypergraph, g2: Hypergraph) -> Hypergraph:
    if g1.signature != g2.signature:
        raise SignatureMismatch("union of graphs over different signatures")
    nodes = {f"a:{v}" for v in g1.nodes} | {f"b:{v}" for v in g2.nodes}
    edges = {}
    for e in g1.elabel:
        edges[f"a:{e}"] = (g1.elabel[e], tuple(f"a:{v}" for v in g1.conn[e]))
    for e in g2.elabel:
        edges[f"b:{e}"] = (g2.elabel[e], tuple(f"b:{v}" for v in g2.conn[e]))
    return Hypergraph(g1.signature, nodes, edges)


def iter_iso_classes(graphs: Iterable[Hypergraph]) -> Iterator[Hypergraph]:
    """One representative per isomorphism class, in canonical-key order."""
    seen: dict[bytes, Hypergraph] = {}
    for g in graphs:
        seen.setdefault(canonical_key(g), g)
    for k in sorted(seen):
        yield seen[k]
