"""Hypergraph invariants, isomorphism, canonical keys, paths, restrictions."""

from __future__ import annotations

import random

import pytest

import fixtures as fx
from uncoverkit.errors import ArityMismatch, DanglingEndpoint, NotDirectedGraph, UnknownLabel
from uncoverkit.hypergraph import (
    Hypergraph,
    RestrictionSpec,
    canonical_key,
    in_restriction,
    isomorphic,
    longest_undirected_path,
    max_parallel_multiplicity,
    renamed,
    validate,
)


def test_validate_empty_graph():
    validate(fx.empty_graph())


def test_validate_arity_mismatch():
    g = Hypergraph(fx.RIGHTS_SIG, {"a", "b", "c"}, {"w": ("W", ("a", "b", "c"))})
    with pytest.raises(ArityMismatch):
        validate(g)


def test_validate_dangling_endpoint():
    g = Hypergraph(fx.RIGHTS_SIG, {"a"}, {"w": ("W", ("a", "ghost"))})
    with pytest.raises(DanglingEndpoint):
        validate(g)


def test_validate_unknown_label():
    g = Hypergraph(fx.RIGHTS_SIG, {"a"}, {"z": ("Z", ("a",))})
    with pytest.raises(UnknownLabel):
        validate(g)


def test_validate_error_graph():
    validate(fx.error_graph())


def test_isomorphic_identity():
    g = fx.error_graph()
    assert isomorphic(g, g)


def test_isomorphic_cardinality():
    assert not isomorphic(fx.empty_graph(), Hypergraph(fx.RIGHTS_SIG, {"v"}))


def test_isomorphic_user_swap():
    g = fx.error_graph()
    swapped = renamed(
        g,
        {"u1": "u2", "u2": "u1", "o": "o"},
        {e: e for e in g.elabel},
    )
    # oracle: exhaustive bijection search
    assert fx.brute_force_is_isomorphic(g, swapped)
    assert isomorphic(g, swapped)


def test_canonical_key_contract_on_examples():
    g = fx.error_graph()
    swapped = renamed(g, {"u1": "u2", "u2": "u1", "o": "o"}, {e: e for e in g.elabel})
    assert canonical_key(g) == canonical_key(swapped)
    assert canonical_key(fx.empty_graph()) != canonical_key(
        Hypergraph(fx.RIGHTS_SIG, {"v"})
    )


def test_canonical_key_random_relabelings():
    rng = random.Random(7)
    g = fx.error_graph()
    key = canonical_key(g)
    nodes = sorted(g.nodes)
    edges = sorted(g.elabel)
    for i in range(100):
        np = rng.sample(nodes, len(nodes))
        ep = rng.sample(edges, len(edges))
        h = renamed(g, dict(zip(nodes, np)), dict(zip(edges, ep)))
        assert canonical_key(h) == key


def _random_graph(rng, sig, max_nodes, max_edges):
    n = rng.randint(0, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    edges = []
    labels = sorted(sig.labels)
    for i in range(rng.randint(0, max_edges)):
        label = rng.choice(labels)
        k = sig.arity(label)
        if k > 0 and n == 0:
            continue
        edges.append((f"e{i}", label, *(rng.choice(nodes) for _ in range(k))))
    return Hypergraph.build(sig, nodes, edges)


def test_canonical_key_agrees_with_isomorphism_on_corpus():
    rng = random.Random(11)
    corpus = [_random_graph(rng, fx.RIGHTS_SIG, 5, 5) for _ in range(40)]
    for g1 in corpus:
        for g2 in corpus:
            expected = fx.brute_force_is_isomorphic(g1, g2)
            assert (canonical_key(g1) == canonical_key(g2)) == expected


def test_longest_path_examples():
    two = Hypergraph.build(fx.RIGHTS_SIG, "a b", [("w", "W", "a", "b")])
    assert longest_undirected_path(two) == 1
    assert longest_undirected_path(fx.empty_graph()) == 0
    assert fx.brute_force_longest_path(fx.error_graph()) == 2
    assert longest_undirected_path(fx.error_graph()) == 2


def test_longest_path_ignores_unary_edges_and_loops():
    g = Hypergraph.build(fx.RIGHTS_SIG, "a", [("lu", "U", "a")])
    assert longest_undirected_path(g) == 0
    loop = Hypergraph.build(fx.ARROW_SIG, "a", [("l", "A", "a", "a")])
    assert longest_undirected_path(loop) == 0


def test_longest_path_matches_bruteforce_on_corpus():
    rng = random.Random(23)
    for _ in range(60):
        g = _random_graph(rng, fx.RIGHTS_SIG, 6, 6)
        assert longest_undirected_path(g) == fx.brute_force_longest_path(g)


def test_multiplicity_examples():
    single = fx.arrow_graph("a b", [("e", "A", "a", "b")])
    assert max_parallel_multiplicity(single) == 1
    double = fx.arrow_graph("a b", [("e", "A", "a", "b"), ("f", "A", "a", "b")])
    assert max_parallel_multiplicity(double) == 2
    opposed = fx.arrow_graph("a b", [("e", "A", "a", "b"), ("f", "A", "b", "a")])
    assert max_parallel_multiplicity(opposed) == 1


def test_multiplicity_rejects_hyperedges():
    g = fx.user_node()
    with pytest.raises(NotDirectedGraph):
        max_parallel_multiplicity(g)


def test_in_restriction_examples():
    assert in_restriction(fx.empty_graph(), RestrictionSpec.path(0))
    assert in_restriction(fx.error_graph(), RestrictionSpec.path(2))
    path3 = fx.arrow_graph(
        "a b c", [("e", "A", "a", "b"), ("f", "A", "b", "c")]
    )
    assert not in_restriction(path3, RestrictionSpec.path(1))
    assert in_restriction(fx.two_parallel_edges(), RestrictionSpec.path_mult(4, 2))
    assert not in_restriction(fx.two_parallel_edges(), RestrictionSpec.path_mult(4, 1))


def test_restriction_downward_closed():
    rng = random.Random(5)
    spec_path = RestrictionSpec.path(2)
    spec_pm = RestrictionSpec.path_mult(2, 2)
    for _ in range(60):
        g = _random_graph(rng, fx.ARROW_SIG, 5, 6)
        for spec in (spec_path, spec_pm):
            if not in_restriction(g, spec):
                continue
            drop_edges = {e for e in g.elabel if rng.random() < 0.5}
            keep_edges = {
                e: (g.elabel[e], g.conn[e]) for e in g.elabel if e not in drop_edges
            }
            covered = {v for (_, ns) in keep_edges.values() for v in ns}
            drop_nodes = {v for v in g.nodes - covered if rng.random() < 0.5}
            h = Hypergraph(g.signature, g.nodes - drop_nodes, keep_edges)
            assert in_restriction(h, spec)


def test_restriction_spec_validation():
    with pytest.raises(ValueError):
        RestrictionSpec.path_mult(3, 0)
    with pytest.raises(ValueError):
        RestrictionSpec.path(-1)
    with pytest.raises(ValueError):
        RestrictionSpec("bogus")
