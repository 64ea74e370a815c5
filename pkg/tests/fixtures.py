"""Shared graphs, rules and independent oracles for the test suite.

The access-rights model: user nodes carry a unary U edge, object nodes a
unary O edge, and access rights are binary R/W edges from user to object.
"""

from __future__ import annotations

import itertools

from uncoverkit.hypergraph import Hypergraph, Signature
from uncoverkit.morphism import NAC, PartialMorphism, Rule

RIGHTS_SIG = Signature({"U": 1, "O": 1, "R": 2, "W": 2})
ARROW_SIG = Signature({"A": 2})


def G(nodes, edges=()):
    return Hypergraph.build(RIGHTS_SIG, nodes, edges)


def empty_graph(sig=RIGHTS_SIG):
    return Hypergraph(sig)


def error_graph():
    """Two users each holding write access to one shared object."""
    return G(
        "u1 u2 o",
        [
            ("lu1", "U", "u1"),
            ("lu2", "U", "u2"),
            ("lo", "O", "o"),
            ("w1", "W", "u1", "o"),
            ("w2", "W", "u2", "o"),
        ],
    )


def single_user_two_writes():
    return G(
        "u o",
        [
            ("lu", "U", "u"),
            ("lo", "O", "o"),
            ("w1", "W", "u", "o"),
            ("w2", "W", "u", "o"),
        ],
    )


def user_node():
    return G("u", [("lu", "U", "u")])


def _rule(name, lhs, rhs, node_pairs, edge_pairs, nacs=()):
    span = PartialMorphism(lhs, rhs, dict(node_pairs), dict(edge_pairs))
    r = Rule(name, lhs, rhs, span, list(nacs))
    r.check()
    return r


def add_user_rule():
    return _rule("add_user", empty_graph(), user_node(), {}, {})


def add_object_rule(label):
    lhs = user_node()
    rhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o"), ("a", label, "u", "o")])
    return _rule(f"add_object_{label.lower()}", lhs, rhs, {"u": "u"}, {"lu": "lu"})


def delete_user_rule():
    return _rule("delete_user", user_node(), empty_graph(), {}, {})


def delete_object_rule():
    lhs = G("o", [("lo", "O", "o")])
    return _rule("delete_object", lhs, empty_graph(), {}, {})


def trade_rule(label):
    lhs = G(
        "u1 u2 o",
        [
            ("lu1", "U", "u1"),
            ("lu2", "U", "u2"),
            ("lo", "O", "o"),
            ("a", label, "u1", "o"),
        ],
    )
    rhs = G(
        "u1 u2 o",
        [
            ("lu1", "U", "u1"),
            ("lu2", "U", "u2"),
            ("lo", "O", "o"),
            ("b", label, "u2", "o"),
        ],
    )
    return _rule(
        f"trade_{label.lower()}",
        lhs,
        rhs,
        {"u1": "u1", "u2": "u2", "o": "o"},
        {"lu1": "lu1", "lu2": "lu2", "lo": "lo"},
    )


def drop_access_rule(label):
    lhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o"), ("a", label, "u", "o")])
    rhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o")])
    return _rule(
        f"drop_{label.lower()}", lhs, rhs, {"u": "u", "o": "o"}, {"lu": "lu", "lo": "lo"}
    )


def get_read_rule():
    lhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o")])
    rhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o"), ("a", "R", "u", "o")])
    return _rule("get_read", lhs, rhs, {"u": "u", "o": "o"}, {"lu": "lu", "lo": "lo"})


def downgrade_rule():
    lhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o"), ("w", "W", "u", "o")])
    rhs = G("u o", [("lu", "U", "u"), ("lo", "O", "o"), ("r", "R", "u", "o")])
    return _rule("downgrade", lhs, rhs, {"u": "u", "o": "o"}, {"lu": "lu", "lo": "lo"})


def rights_rules():
    """The full multi-user access-rights rule set (R/W variants expanded)."""
    return [
        add_user_rule(),
        add_object_rule("R"),
        add_object_rule("W"),
        delete_user_rule(),
        delete_object_rule(),
        trade_rule("R"),
        trade_rule("W"),
        drop_access_rule("R"),
        drop_access_rule("W"),
        get_read_rule(),
        downgrade_rule(),
    ]


# --- transitive-closure model (single binary label, edge-forbidding NAC) ---


def arrow_graph(nodes, edges=()):
    return Hypergraph.build(ARROW_SIG, nodes, edges)


def two_parallel_edges():
    return arrow_graph("x y", [("p1", "A", "x", "y"), ("p2", "A", "x", "y")])


def chain(n):
    nodes = [f"n{i}" for i in range(n + 1)]
    edges = [(f"c{i}", "A", f"n{i}", f"n{i+1}") for i in range(n)]
    return arrow_graph(" ".join(nodes), edges)


def transitive_closure_rule(with_nac=True):
    lhs = arrow_graph("a b c", [("e1", "A", "a", "b"), ("e2", "A", "b", "c")])
    rhs = arrow_graph(
        "a b c",
        [("e1", "A", "a", "b"), ("e2", "A", "b", "c"), ("e3", "A", "a", "c")],
    )
    nacs = []
    if with_nac:
        pattern = arrow_graph(
            "a b c",
            [("e1", "A", "a", "b"), ("e2", "A", "b", "c"), ("x", "A", "a", "c")],
        )
        embedding = PartialMorphism(
            lhs, pattern, {"a": "a", "b": "b", "c": "c"}, {"e1": "e1", "e2": "e2"}
        )
        nacs.append(NAC(pattern, embedding))
    return _rule(
        "transitive_closure",
        lhs,
        rhs,
        {"a": "a", "b": "b", "c": "c"},
        {"e1": "e1", "e2": "e2"},
        nacs,
    )


# --- random instance generators ----------------------------------------------


def random_graph(rng, sig, max_nodes, max_edges, node_prefix="n"):
    n = rng.randint(0, max_nodes)
    nodes = [f"{node_prefix}{i}" for i in range(n)]
    labels = sorted(sig.labels)
    edges = []
    for i in range(rng.randint(0, max_edges)):
        label = rng.choice(labels)
        k = sig.arity(label)
        if k > 0 and n == 0:
            continue
        edges.append((f"{node_prefix}e{i}", label, *(rng.choice(nodes) for _ in range(k))))
    return Hypergraph.build(sig, nodes, edges)


def random_rule(rng, sig, allow_merge=True, max_lhs_nodes=2, max_lhs_edges=2, name="rnd"):
    """A random rule: delete some lhs elements, optionally merge nodes, add
    fresh elements.  Always a valid span."""
    lhs = random_graph(rng, sig, max_lhs_nodes, max_lhs_edges, node_prefix="l")
    kept_nodes = [v for v in sorted(lhs.nodes) if rng.random() < 0.75]
    node_map = {}
    groups: list[list[str]] = []
    for v in kept_nodes:
        if allow_merge and groups and rng.random() < 0.25:
            groups[rng.randrange(len(groups))].append(v)
        else:
            groups.append([v])
    for i, group in enumerate(groups):
        for v in group:
            node_map[v] = f"r{i}"
    rhs_nodes = {f"r{i}" for i in range(len(groups))}
    rhs_edges = {}
    edge_map = {}
    for e in lhs.edge_ids():
        if not all(v in node_map for v in lhs.conn[e]):
            continue
        if rng.random() < 0.7:
            rid = f"re{len(rhs_edges)}"
            rhs_edges[rid] = (lhs.elabel[e], tuple(node_map[v] for v in lhs.conn[e]))
            edge_map[e] = rid
    for i in range(rng.randint(0, 1)):
        rhs_nodes.add(f"rn{i}")
    pool = sorted(rhs_nodes)
    labels = sorted(sig.labels)
    for i in range(rng.randint(0, 1)):
        label = rng.choice(labels)
        k = sig.arity(label)
        if k > 0 and not pool:
            continue
        rhs_edges[f"rf{i}"] = (label, tuple(rng.choice(pool) for _ in range(k)))
    rhs = Hypergraph(sig, rhs_nodes, rhs_edges)
    rule = Rule(name, lhs, rhs, PartialMorphism(lhs, rhs, node_map, edge_map))
    rule.check()
    return rule


def random_gts(rng, sig, max_rules=3, allow_merge=False):
    """A random rule set plus a small non-empty error graph."""
    rules = [
        random_rule(rng, sig, allow_merge=allow_merge, name=f"r{i}")
        for i in range(rng.randint(1, max_rules))
    ]
    while True:
        error = random_graph(rng, sig, 3, 2, node_prefix="f")
        if error.nodes or error.elabel:
            return rules, error


# --- independent oracles -----------------------------------------------------


def brute_force_total_morphisms(l, g):
    """Every total morphism l -> g by naive enumeration of all assignments."""
    lnodes, ledges = sorted(l.nodes), sorted(l.elabel)
    gnodes, gedges = sorted(g.nodes), sorted(g.elabel)
    out = []
    for nvals in itertools.product(gnodes, repeat=len(lnodes)):
        nm = dict(zip(lnodes, nvals))
        for evals in itertools.product(gedges, repeat=len(ledges)):
            em = dict(zip(ledges, evals))
            ok = True
            for e, f in em.items():
                if l.elabel[e] != g.elabel[f]:
                    ok = False
                    break
                if tuple(nm[v] for v in l.conn[e]) != g.conn[f]:
                    ok = False
                    break
            if ok:
                out.append((nm, em))
    return out


def brute_force_is_isomorphic(g1, g2):
    """Exhaustive node-bijection search, independent of canonical keys.

    For each node bijection, edge bijections exist exactly when the
    (label, mapped endpoints) multisets agree.
    """
    if len(g1.nodes) != len(g2.nodes) or len(g1.elabel) != len(g2.elabel):
        return False
    nodes1, nodes2 = sorted(g1.nodes), sorted(g2.nodes)
    rel2 = sorted((g2.elabel[e], g2.conn[e]) for e in g2.elabel)
    for perm in itertools.permutations(nodes2):
        nm = dict(zip(nodes1, perm))
        rel1 = sorted(
            (g1.elabel[e], tuple(nm[v] for v in g1.conn[e])) for e in g1.elabel
        )
        if rel1 == rel2:
            return True
    return len(g1.nodes) == 0 and len(g1.elabel) == 0


def brute_force_embeddings(g1, g2, induced=False):
    """All embeddings g1 -> g2 as injective node maps, optionally edge-closed.

    Same-label parallel edges are interchangeable, so an injective edge map
    exists for a node map exactly when every (label, endpoints) group of g1
    is no larger than the corresponding group of g2; the induced case needs
    equality on every group lying inside the image.
    """
    nodes1, nodes2 = sorted(g1.nodes), sorted(g2.nodes)
    if len(nodes1) > len(nodes2) or len(g1.elabel) > len(g2.elabel):
        return []
    groups2 = {}
    for e in g2.elabel:
        key = (g2.elabel[e], g2.conn[e])
        groups2[key] = groups2.get(key, 0) + 1
    found = []
    for images in itertools.permutations(nodes2, len(nodes1)):
        nm = dict(zip(nodes1, images))
        groups1 = {}
        for e in g1.elabel:
            key = (g1.elabel[e], tuple(nm[v] for v in g1.conn[e]))
            groups1[key] = groups1.get(key, 0) + 1
        if any(groups1[k] > groups2.get(k, 0) for k in groups1):
            continue
        if induced:
            image = set(images)
            inside = {
                k: c
                for k, c in groups2.items()
                if all(v in image for v in k[1])
            }
            if groups1 != inside:
                continue
        found.append(nm)
    return found


def poc_agreement_check(rng, sig, order, restriction, variant, rounds):
    """Compare engine pushout complements against the brute-force oracle.

    Budgets derive from the instance; engine results are compared within the
    budgets (a minimal complement within budget is always found by the
    oracle, and vice versa).  Returns the number of instances checked.
    """
    from uncoverkit.hypergraph import canonical_key, in_restriction
    from uncoverkit.morphism import enumerate_matches
    from uncoverkit.order import OrderKind, minimize
    from uncoverkit.poc import (
        PocRequest,
        brute_force_pushout_complements,
        minimal_pushout_complements,
    )

    checked = 0
    for _ in range(rounds):
        rule = random_rule(rng, sig, allow_merge=(order is OrderKind.SUBGRAPH))
        s = random_graph(rng, sig, 3, 3, node_prefix="s")
        if order is OrderKind.INDUCED_SUBGRAPH and not in_restriction(s, restriction):
            continue
        comatches = enumerate_matches(rule.rhs, s)
        if not comatches:
            continue
        comatch = comatches[rng.randrange(len(comatches))]
        req = PocRequest(rule, comatch, order, variant, restriction)
        engine = minimal_pushout_complements(req).graphs()

        node_budget = min(5, len(s.nodes) + len(rule.deleted_nodes()))
        edge_budget = min(6, len(s.elabel) + len(rule.deleted_edges()) + 2)
        brute = [
            g
            for g, m in brute_force_pushout_complements(
                rule, comatch, node_budget, edge_budget
            )
            if variant == 2 or in_restriction(g, restriction)
        ]
        brute_min = minimize(brute, order)
        engine_within = [
            g
            for g in engine
            if len(g.nodes) <= node_budget and len(g.elabel) <= edge_budget
        ]
        assert {canonical_key(g) for g in brute_min} == {
            canonical_key(g) for g in engine_within
        }, f"pushout-complement mismatch for {rule.span!r} on {s!r}"
        checked += 1
    return checked


def brute_force_longest_path(g):
    """Enumerate every alternating elementary sequence explicitly."""
    best = 0
    incidence = {
        v: [e for e, ns in g.conn.items() if v in ns] for v in g.nodes
    }

    def extend(path_nodes, path_edges):
        nonlocal best
        best = max(best, len(path_edges))
        v = path_nodes[-1]
        for e in incidence[v]:
            if e in path_edges:
                continue
            for w in g.conn[e]:
                if w == v or w in path_nodes:
                    continue
                extend(path_nodes + [w], path_edges + [e])

    for v in g.nodes:
        extend([v], [])
    return best
