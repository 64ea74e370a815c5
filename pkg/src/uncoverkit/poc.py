"""Minimal pushout complements: the backward step's core computation.

Given a rule rho: L -> R (already composed with an order morphism by the
caller) and a total co-match of R into a target graph S, enumerate the
graphs G with a conflict-free match of L whose pushout along rho rebuilds S.
Candidates are generated structurally and then each one is verified by
recomputing the pushout, so soundness never depends on the enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import BudgetTooLarge, NotDirectedGraph, TypeMismatch, UnsupportedOrder
from .hypergraph import (
    Hypergraph,
    RestrictionSpec,
    canonical_key,
    in_restriction,
    renamed,
)
from .morphism import (
    PartialMorphism,
    Rule,
    enumerate_matches,
    is_conflict_free,
    nacs_satisfied,
)
from .order import OrderKind, leq
from .pushout import pushout


@dataclass(frozen=True)
class PocRequest:
    rule: Rule
    comatch: PartialMorphism  # total morphism rule.rhs -> S
    order: OrderKind
    variant: int  # 1: restricted to Q, 2: unrestricted
    restriction: RestrictionSpec = field(default_factory=RestrictionSpec.all_graphs)


@dataclass
class PocEntry:
    graph: Hypergraph
    match: PartialMorphism  # total conflict-free L -> graph
    corule: PartialMorphism  # partial graph -> S


@dataclass
class PocResult:
    complements: list[PocEntry]

    def graphs(self) -> list[Hypergraph]:
        return [c.graph for c in self.complements]


# ---------------------------------------------------------------------------
# Verification


def _pushout_matches_target(
    rule: Rule,
    comatch: PartialMorphism,
    g: Hypergraph,
    m: PartialMorphism,
    corule: PartialMorphism,
) -> bool:
    """Recompute the pushout of (rule.span, m) and check it is S via the
    isomorphism induced by the co-match and co-rule."""
    p, f_star, g_star = pushout(rule.span, m)
    s = comatch.target
    iota_n: dict[str, str] = {}
    iota_e: dict[str, str] = {}

    def record(table: dict[str, str], key: str, value: str) -> bool:
        if table.get(key, value) != value:
            return False
        table[key] = value
        return True

    for u, pv in f_star.node_map.items():
        if not record(iota_n, pv, comatch.node_map[u]):
            return False
    for u, pe in f_star.edge_map.items():
        if not record(iota_e, pe, comatch.edge_map[u]):
            return False
    for v in g.nodes:
        pv = g_star.node_map.get(v)
        z = corule.node_map.get(v)
        if (pv is None) != (z is None):
            return False
        if pv is not None and not record(iota_n, pv, z):
            return False
    for e in g.elabel:
        pe = g_star.edge_map.get(e)
        z = corule.edge_map.get(e)
        if (pe is None) != (z is None):
            return False
        if pe is not None and not record(iota_e, pe, z):
            return False

    if set(iota_n) != p.nodes or set(iota_n.values()) != s.nodes:
        return False
    if set(iota_e) != set(p.elabel) or set(iota_e.values()) != set(s.elabel):
        return False
    if len(set(iota_n.values())) != len(iota_n) or len(set(iota_e.values())) != len(iota_e):
        return False
    for e, f in iota_e.items():
        if p.elabel[e] != s.elabel[f]:
            return False
        if tuple(iota_n[v] for v in p.conn[e]) != s.conn[f]:
            return False
    return True


def is_pushout_complement(
    rule: Rule, comatch: PartialMorphism, g: Hypergraph, m: PartialMorphism
) -> PartialMorphism | None:
    """Decide whether (g, m) is a pushout complement of (rule.span, comatch).

    Returns the induced co-rule g -> S when it is, searching over the
    isomorphisms that commute with the co-match; None otherwise.
    """
    if not m.is_total() or not is_conflict_free(m, rule.span):
        return None
    p, f_star, g_star = pushout(rule.span, m)
    s = comatch.target
    if len(p.nodes) != len(s.nodes) or len(p.elabel) != len(s.elabel):
        return None
    forced_n: dict[str, str] = {}
    forced_e: dict[str, str] = {}
    for u, pv in f_star.node_map.items():
        want = comatch.node_map[u]
        if forced_n.get(pv, want) != want:
            return None
        forced_n[pv] = want
    for u, pe in f_star.edge_map.items():
        want = comatch.edge_map[u]
        if forced_e.get(pe, want) != want:
            return None
        forced_e[pe] = want
    iso = _complete_iso(p, s, forced_n, forced_e)
    if iso is None:
        return None
    nm = {v: iso[0][pv] for v, pv in g_star.node_map.items()}
    em = {e: iso[1][pe] for e, pe in g_star.edge_map.items()}
    return PartialMorphism(g, s, nm, em)


def _complete_iso(
    p: Hypergraph, s: Hypergraph, forced_n: dict[str, str], forced_e: dict[str, str]
) -> tuple[dict[str, str], dict[str, str]] | None:
    """Extend forced assignments to a full label/conn-preserving bijection."""
    if len(set(forced_n.values())) != len(forced_n):
        return None
    if len(set(forced_e.values())) != len(forced_e):
        return None
    nmap = dict(forced_n)
    emap = dict(forced_e)

    # propagate endpoints of forced edges
    for pe, se in list(emap.items()):
        if p.elabel[pe] != s.elabel[se]:
            return None
        for pv, sv in zip(p.conn[pe], s.conn[se]):
            if nmap.get(pv, sv) != sv:
                return None
            nmap[pv] = sv
    if len(set(nmap.values())) != len(nmap):
        return None

    free_edges = [e for e in p.edge_ids() if e not in emap]

    def edges_then_nodes(i: int) -> tuple[dict, dict] | None:
        if i == len(free_edges):
            return place_nodes()
        pe = free_edges[i]
        used = set(emap.values())
        for se in s.edge_ids():
            if se in used or s.elabel[se] != p.elabel[pe]:
                continue
            saved = dict(nmap)
            ok = True
            for pv, sv in zip(p.conn[pe], s.conn[se]):
                if nmap.get(pv, sv) != sv:
                    ok = False
                    break
                nmap[pv] = sv
            if ok and len(set(nmap.values())) != len(nmap):
                ok = False
            if ok:
                emap[pe] = se
                result = edges_then_nodes(i + 1)
                if result is not None:
                    return result
                del emap[pe]
            nmap.clear()
            nmap.update(saved)
        return None

    def place_nodes() -> tuple[dict, dict] | None:
        free = [v for v in p.node_ids() if v not in nmap]
        avail = [w for w in s.node_ids() if w not in set(nmap.values())]
        if len(free) != len(avail):
            return None
        for perm in itertools.permutations(avail):
            return dict(nmap) | dict(zip(free, perm)), dict(emap)
        return dict(nmap), dict(emap)

    return edges_then_nodes(0)


# ---------------------------------------------------------------------------
# Structural candidate enumeration


def _set_partitions(items: list) -> list[list[list]]:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for part in _set_partitions(rest):
        for i in range(len(part)):
            out.append(part[:i] + [[first] + part[i]] + part[i + 1 :])
        out.append([[first]] + part)
    return out


def _connected(blocks: list[list[str]], us: list[str], preimage_of: dict[str, str]) -> bool:
    """Bipartite connectivity of partition blocks against the co-match fibre."""
    if len(blocks) + len(us) <= 1:
        return True
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for i in range(len(blocks)):
        parent[("b", i)] = ("b", i)
    for u in us:
        parent[("u", u)] = ("u", u)
    for i, block in enumerate(blocks):
        for x in block:
            union(("b", i), ("u", preimage_of[x]))
    roots = {find(k) for k in parent}
    return len(roots) == 1


def _complement_candidates(rule: Rule, comatch: PartialMorphism) -> list[PocEntry]:
    rho = rule.span
    l, s = rule.lhs, comatch.target
    def_nodes = set(rho.node_map)
    del_nodes = sorted(l.nodes - def_nodes)
    def_edges = set(rho.edge_map)
    del_edges = sorted(set(l.elabel) - def_edges)
    created_n = set(rule.created_nodes())
    created_e = set(rule.created_edges())

    u_nodes: dict[str, list[str]] = {}
    for u in sorted(comatch.source.nodes):
        u_nodes.setdefault(comatch.node_map[u], []).append(u)
    u_edges: dict[str, list[str]] = {}
    for u in comatch.source.edge_ids():
        u_edges.setdefault(comatch.edge_map[u], []).append(u)

    removed_nodes: set[str] = set()
    removed_edges: set[str] = set()
    for z, us in u_nodes.items():
        created = [u for u in us if u in created_n]
        if created:
            if len(us) > 1:
                return []  # a freshly created node cannot be glued to anything
            removed_nodes.add(z)
    for z, us in u_edges.items():
        created = [u for u in us if u in created_e]
        if created:
            if len(us) > 1:
                return []
            removed_edges.add(z)

    # a node created by the rule cannot carry pre-existing edges
    for e, ns in s.conn.items():
        if e in removed_edges:
            continue
        if any(v in removed_nodes for v in ns):
            return []

    # L-preimages of each kept target element
    x_nodes: dict[str, list[str]] = {}
    for x in sorted(def_nodes):
        z = comatch.node_map[rho.node_map[x]]
        x_nodes.setdefault(z, []).append(x)
    x_edges: dict[str, list[str]] = {}
    for x in sorted(def_edges):
        z = comatch.edge_map[rho.edge_map[x]]
        x_edges.setdefault(z, []).append(x)

    kept_node_zs = sorted(z for z in u_nodes if z not in removed_nodes)
    kept_edge_zs = sorted(z for z in u_edges if z not in removed_edges)

    rho_n = rho.node_map
    rho_e = rho.edge_map

    node_options: list[list[list[list[str]]]] = []
    for z in kept_node_zs:
        xs = x_nodes[z]
        opts = [
            blocks
            for blocks in _set_partitions(xs)
            if _connected(blocks, u_nodes[z], rho_n)
        ]
        if not opts:
            return []
        node_options.append(opts)

    context_nodes = sorted(s.nodes - set(u_nodes))
    context_edges = sorted(set(s.elabel) - set(u_edges))

    entries: list[PocEntry] = []

    for node_combo in itertools.product(*node_options):
        node_slot: dict[str, tuple] = {}  # L-node -> slot key
        slot_ids: dict[tuple, tuple] = {}  # slot key -> (z, block marker)
        blocks_of_z: dict[str, list[tuple]] = {}
        for z, blocks in zip(kept_node_zs, node_combo):
            keys = []
            for block in blocks:
                key = ("q", z, min(block))
                keys.append(key)
                slot_ids[key] = z
                for x in block:
                    node_slot[x] = key
            blocks_of_z[z] = keys

        # edge partitions: conn-compatible blocks, connected against the fibre
        edge_options: list[list[list[list[str]]]] = []
        feasible = True
        for z in kept_edge_zs:
            xs = x_edges[z]
            opts = []
            for blocks in _set_partitions(xs):
                ok = all(
                    len(
                        {
                            tuple(node_slot[v] for v in l.conn[x])
                            for x in block
                        }
                    )
                    == 1
                    for block in blocks
                ) and _connected(blocks, u_edges[z], rho_e)
                if ok:
                    opts.append(blocks)
            if not opts:
                feasible = False
                break
            edge_options.append(opts)
        if not feasible:
            continue

        for edge_combo in itertools.product(*edge_options):
            edge_slot: dict[str, tuple] = {}
            slot_edges: dict[tuple, str] = {}  # slot key -> z
            for z, blocks in zip(kept_edge_zs, edge_combo):
                for block in blocks:
                    key = ("qe", z, min(block))
                    slot_edges[key] = z
                    for x in block:
                        edge_slot[x] = key

            # fibres of deleted elements: merged elements must agree on
            # labels and (for edges) on endpoint fibres
            for del_node_part in _set_partitions(del_nodes):
                node_fiber: dict[str, tuple] = {}
                for block in del_node_part:
                    key = ("d", min(block))
                    for x in block:
                        node_fiber[x] = key

                def l_node_target(x: str) -> tuple:
                    return node_slot[x] if x in node_slot else node_fiber[x]

                edge_parts = []
                for block in _set_partitions(del_edges):
                    ok = all(
                        len({l.elabel[x] for x in blk}) <= 1
                        and len(
                            {tuple(l_node_target(v) for v in l.conn[x]) for x in blk}
                        )
                        <= 1
                        for blk in block
                    )
                    if ok:
                        edge_parts.append(block)

                for del_edge_part in edge_parts:
                    edge_fiber: dict[str, tuple] = {}
                    for block in del_edge_part:
                        key = ("de", min(block))
                        for x in block:
                            edge_fiber[x] = key

                    # context edges may choose any slot of a split endpoint
                    choice_space = []
                    for e in context_edges:
                        per_pos = []
                        for w in s.conn[e]:
                            if w in removed_nodes:
                                per_pos = None
                                break
                            if w in blocks_of_z:
                                per_pos.append(blocks_of_z[w])
                            else:
                                per_pos.append([("c", w)])
                        if per_pos is None:
                            break
                        choice_space.append(
                            [tuple(c) for c in itertools.product(*per_pos)]
                        )
                    else:
                        for ctx_combo in itertools.product(*choice_space):
                            entry = _build_candidate(
                                rule,
                                comatch,
                                context_nodes,
                                context_edges,
                                ctx_combo,
                                node_slot,
                                edge_slot,
                                node_fiber,
                                edge_fiber,
                                slot_ids,
                                slot_edges,
                            )
                            if entry is not None:
                                entries.append(entry)
    return entries


def _build_candidate(
    rule: Rule,
    comatch: PartialMorphism,
    context_nodes: list[str],
    context_edges: list[str],
    ctx_conns: tuple,
    node_slot: dict[str, tuple],
    edge_slot: dict[str, tuple],
    node_fiber: dict[str, tuple],
    edge_fiber: dict[str, tuple],
    slot_ids: dict[tuple, str],
    slot_edges: dict[tuple, str],
) -> PocEntry | None:
    l, s = rule.lhs, comatch.target

    g_nodes: set[tuple] = {("c", v) for v in context_nodes}
    g_nodes.update(slot_ids)
    g_nodes.update(node_fiber.values())

    def l_node_target(x: str) -> tuple:
        return node_slot[x] if x in node_slot else node_fiber[x]

    g_edges: dict[tuple, tuple[str, tuple]] = {}
    for e, conn_choice in zip(context_edges, ctx_conns):
        g_edges[("c", e)] = (s.elabel[e], tuple(conn_choice))
    seen_slots: set[tuple] = set()
    for x, key in edge_slot.items():
        conn = tuple(l_node_target(v) for v in l.conn[x])
        if key in seen_slots:
            if g_edges[key] != (l.elabel[x], conn):
                return None
            continue
        seen_slots.add(key)
        g_edges[key] = (l.elabel[x], conn)
    seen_fibers: set[tuple] = set()
    for x, key in edge_fiber.items():
        conn = tuple(l_node_target(v) for v in l.conn[x])
        if key in seen_fibers:
            if g_edges[key] != (l.elabel[x], conn):
                return None
            continue
        seen_fibers.add(key)
        g_edges[key] = (l.elabel[x], conn)

    raw = Hypergraph(
        s.signature,
        {str(v) for v in g_nodes},
        {str(e): (lab, tuple(str(v) for v in conn)) for e, (lab, conn) in g_edges.items()},
    )
    g, nrename, erename = _normalize(raw)

    match = PartialMorphism(
        l,
        g,
        {x: nrename[str(l_node_target(x))] for x in l.nodes},
        {
            x: erename[str(edge_slot[x] if x in edge_slot else edge_fiber[x])]
            for x in l.elabel
        },
    )
    corule_nodes = {nrename[str(("c", v))]: v for v in context_nodes}
    for key, z in slot_ids.items():
        corule_nodes[nrename[str(key)]] = z
    corule_edges = {erename[str(("c", e))]: e for e in context_edges}
    for key, z in slot_edges.items():
        corule_edges[erename[str(key)]] = z
    corule = PartialMorphism(g, s, corule_nodes, corule_edges)

    if not match.is_total() or not is_conflict_free(match, rule.span):
        return None
    if not _pushout_matches_target(rule, comatch, g, match, corule):
        return None
    return PocEntry(g, match, corule)


def _normalize(g: Hypergraph) -> tuple[Hypergraph, dict[str, str], dict[str, str]]:
    nmap = {v: f"v{i}" for i, v in enumerate(g.node_ids())}
    emap = {e: f"e{i}" for i, e in enumerate(g.edge_ids())}
    return renamed(g, nmap, emap), nmap, emap


# ---------------------------------------------------------------------------
# The induced-subgraph edge augmentation


def _augment_induced(
    rule: Rule,
    comatch: PartialMorphism,
    base: list[PocEntry],
    restriction: RestrictionSpec,
) -> list[PocEntry]:
    """Close the complement set under adding one edge attached to a node the
    co-rule is undefined on, within the multiplicity/path bounds.

    Expansion states are deduplicated by exact structure per base complement,
    never by graph isomorphism: which node is the re-created one is part of
    the complement and not preserved by graph isomorphisms.  The final
    isomorphism collapse happens in the minimizer.
    """
    labels = sorted(comatch.target.signature.labels)

    def struct_key(base_idx: int, g: Hypergraph):
        return base_idx, tuple(sorted((g.elabel[e], g.conn[e]) for e in g.elabel))

    out: list[PocEntry] = []
    for idx, root in enumerate(base):
        seen = {struct_key(idx, root.graph)}
        queue = [root]
        out.append(root)
        while queue:
            entry = queue.pop(0)
            g = entry.graph
            fresh = sorted(g.nodes - set(entry.corule.node_map))
            if not fresh:
                continue
            eid = f"x{len(g.elabel)}"
            for lab in labels:
                for a in sorted(g.nodes):
                    for b in sorted(g.nodes):
                        if a not in fresh and b not in fresh:
                            continue
                        bigger = Hypergraph(
                            g.signature,
                            g.nodes,
                            {**{e: (g.elabel[e], g.conn[e]) for e in g.elabel},
                             eid: (lab, (a, b))},
                        )
                        if not in_restriction(bigger, restriction):
                            continue
                        key = struct_key(idx, bigger)
                        if key in seen:
                            continue
                        seen.add(key)
                        match = PartialMorphism(
                            rule.lhs, bigger, entry.match.node_map, entry.match.edge_map
                        )
                        corule = PartialMorphism(
                            bigger,
                            comatch.target,
                            entry.corule.node_map,
                            entry.corule.edge_map,
                        )
                        if not _pushout_matches_target(rule, comatch, bigger, match, corule):
                            continue
                        new_entry = PocEntry(bigger, match, corule)
                        out.append(new_entry)
                        queue.append(new_entry)
    return out


# ---------------------------------------------------------------------------
# Public entry points


def _validate_request(req: PocRequest) -> None:
    if req.order is OrderKind.MINOR:
        raise UnsupportedOrder("the minor ordering is not implemented")
    if not req.comatch.is_total():
        raise TypeMismatch("co-matches must be total")
    if req.comatch.source != req.rule.rhs:
        raise TypeMismatch("co-match source must be the rule's right-hand side")
    if req.variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    if req.order is OrderKind.INDUCED_SUBGRAPH:
        if req.variant != 1 or req.restriction.kind != "pathmult":
            raise ValueError(
                "the induced-subgraph order needs variant 1 with a path+multiplicity bound"
            )
        for g in (req.rule.lhs, req.rule.rhs, req.comatch.target):
            if not g.is_directed():
                raise NotDirectedGraph("induced-subgraph order needs arity-2 edges only")
    elif req.variant == 1 and req.restriction.kind != "path":
        raise ValueError("variant 1 with the subgraph order needs a path bound")
    elif req.variant == 2 and req.restriction.kind != "all":
        raise ValueError("variant 2 computes the unrestricted pred-basis")


def minimal_pushout_complements(req: PocRequest) -> PocResult:
    """The minimal pushout complements of (rule, co-match), per the order.

    Under variant 1 every returned graph lies in the restriction; for the
    induced-subgraph order the set is closed under the edge-augmentation step
    (extra edges attached to re-created nodes, up to the multiplicity bound).
    Complements whose match violates a NAC of the rule are dropped.
    """
    _validate_request(req)
    entries = _complement_candidates(req.rule, req.comatch)
    if req.order is OrderKind.INDUCED_SUBGRAPH:
        entries = [e for e in entries if in_restriction(e.graph, req.restriction)]
        entries = _augment_induced(req.rule, req.comatch, entries, req.restriction)
    elif req.variant == 1:
        entries = [e for e in entries if in_restriction(e.graph, req.restriction)]
    if req.rule.nacs:
        entries = [e for e in entries if nacs_satisfied(e.match, req.rule.nacs)]

    by_key: dict[bytes, PocEntry] = {}
    for entry in entries:
        by_key.setdefault(canonical_key(entry.graph), entry)
    reps = [by_key[k] for k in sorted(by_key)]
    minimal = []
    for entry in reps:
        if any(
            other is not entry and leq(other.graph, entry.graph, req.order)
            for other in reps
        ):
            continue
        minimal.append(entry)
    return PocResult(minimal)


def brute_force_pushout_complements(
    rule: Rule,
    comatch: PartialMorphism,
    node_budget: int,
    edge_budget: int,
) -> list[tuple[Hypergraph, PartialMorphism]]:
    """Testing oracle: every pushout complement within the size budgets,
    found by exhaustive enumeration of graphs and matches."""
    if node_budget > 5 or edge_budget > 6:
        raise BudgetTooLarge(f"budgets ({node_budget}, {edge_budget}) exceed the guard")
    s = comatch.target
    sig = s.signature
    out: list[tuple[Hypergraph, PartialMorphism]] = []
    for g in _enumerate_graphs(sig, node_budget, edge_budget):
        for m in enumerate_matches(rule.lhs, g, conflict_free_wrt=rule):
            if is_pushout_complement(rule, comatch, g, m) is not None:
                out.append((g, m))
    return out


def _enumerate_graphs(sig, node_budget: int, edge_budget: int):
    """One representative per iso class of graphs within the budgets."""
    labels = sorted(sig.labels)
    for n in range(node_budget + 1):
        nodes = [f"v{i}" for i in range(n)]
        shapes = []
        for lab in labels:
            k = sig.arity(lab)
            if k > 0 and n == 0:
                continue
            shapes.extend((lab, conn) for conn in itertools.product(nodes, repeat=k))
        shapes.sort()
        index = {sh: i for i, sh in enumerate(shapes)}
        perms = list(itertools.permutations(nodes))
        for m in range(edge_budget + 1):
            for combo in itertools.combinations_with_replacement(range(len(shapes)), m):
                # keep only the lexicographically least relabelling
                canonical = True
                for perm in perms:
                    ren = dict(zip(nodes, perm))
                    mapped = tuple(
                        sorted(
                            index[(shapes[i][0], tuple(ren[v] for v in shapes[i][1]))]
                            for i in combo
                        )
                    )
                    if mapped < combo:
                        canonical = False
                        break
                if not canonical:
                    continue
                edges = {
                    f"e{j}": (shapes[i][0], shapes[i][1])
                    for j, i in enumerate(combo)
                }
                yield Hypergraph(sig, nodes, edges)
