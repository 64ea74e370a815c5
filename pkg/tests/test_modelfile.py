"""Model-file parsing, validation and round-trips."""

from __future__ import annotations

import pytest

import fixtures as fx
from uncoverkit.errors import ParseError
from uncoverkit.hypergraph import isomorphic
from uncoverkit.modelfile import graph_block_only, parse, parse_file, serialize_graph
from uncoverkit.models import bundled_model_path
from uncoverkit.morphism import find_isomorphism, compose
from uncoverkit.order import OrderKind

MINI = """
sig A 2
graph g { node a; node b; edge e A (a,b); }
analysis { order subgraph; variant 2; restrict none; error g; }
"""


def test_parse_bundled_rights_model():
    model = parse_file(bundled_model_path("rights"))
    assert sorted(model.graphs) == ["double_write", "empty", "error"]
    # seven figure panels, R/W and U/O label pairs expanded to separate rules
    assert len(model.rules) == 11
    assert {r.name for r in model.rules} == {
        "add_user", "add_object_r", "add_object_w", "delete_user", "delete_object",
        "trade_r", "trade_w", "drop_r", "drop_w", "get_read", "downgrade",
    }
    assert isomorphic(model.graphs["error"], fx.error_graph())
    assert model.analysis.order is OrderKind.SUBGRAPH
    assert model.analysis.variant == 2
    assert model.analysis.error_names == ["error"]
    assert model.analysis.initial_names == ["empty"]


def test_parse_bundled_transclosure_model():
    model = parse_file(bundled_model_path("transclosure"))
    assert model.analysis.order is OrderKind.INDUCED_SUBGRAPH
    assert model.analysis.variant == 1
    rule = model.rule("transitive_closure")
    assert len(rule.nacs) == 1
    assert isomorphic(model.graphs["two_parallel"], fx.two_parallel_edges())


def test_missing_order():
    bad = MINI.replace("order subgraph; ", "")
    with pytest.raises(ParseError, match="missing 'order'"):
        parse(bad)


def test_missing_analysis():
    with pytest.raises(ParseError, match="missing analysis block"):
        parse("sig A 2\ngraph g { }\n")


def test_edge_with_unmapped_endpoint_rejected_at_parse():
    bad = """
sig A 2
graph g { node a; node b; edge e A (a,b); }
rule r {
  lhs g;
  rhs g;
  map node a->a;
  map edge e->e;
}
analysis { order subgraph; variant 2; restrict none; error g; }
"""
    with pytest.raises(Exception) as exc:
        parse(bad)
    assert "incident" in str(exc.value).lower() or "IncidentNodeUndefined" in type(exc.value).__name__


def test_induced_requires_binary_labels():
    bad = """
sig A 2
sig U 1
graph g { node a; node b; edge e A (a,b); }
analysis { order induced; variant 1; restrict pathmult 2 1; error g; }
"""
    with pytest.raises(ParseError, match="arity 2"):
        parse(bad)


def test_unknown_graph_reference():
    bad = MINI.replace("error g;", "error ghost;")
    with pytest.raises(ParseError, match="unknown graph"):
        parse(bad)


def test_positioned_syntax_error():
    bad = "sig A 2\ngraph g { node a; edge e A a; }\n"
    with pytest.raises(ParseError, match="line 2"):
        parse(bad)


def test_duplicate_names_rejected():
    with pytest.raises(ParseError, match="duplicate graph"):
        parse("sig A 2\ngraph g { }\ngraph g { }\n" + "analysis { order subgraph; variant 2; restrict none; error g; }")


def test_graph_roundtrip_up_to_isomorphism():
    g = fx.error_graph()
    text = graph_block_only(g, "err")
    text += "\nanalysis { order subgraph; variant 2; restrict none; error err; }\n"
    model = parse(text)
    assert isomorphic(model.graphs["err"], g)


def test_rule_roundtrip_span_commutes():
    model = parse_file(bundled_model_path("rights"))
    rule = model.rule("trade_w")
    mine = fx.trade_rule("W")
    iso_l = find_isomorphism(mine.lhs, rule.lhs)
    iso_r = find_isomorphism(mine.rhs, rule.rhs)
    assert iso_l is not None and iso_r is not None
    assert compose(mine.span, iso_r) == compose(iso_l, rule.span)


def test_serialize_graph_is_deterministic():
    g = fx.error_graph()
    assert serialize_graph("x", g) == serialize_graph("x", g)


def test_minor_order_parses():
    text = MINI.replace("order subgraph", "order minor")
    model = parse(text)
    assert model.analysis.order is OrderKind.MINOR


def test_full_model_roundtrip():
    from uncoverkit.modelfile import serialize_model

    for name in ("rights", "transclosure"):
        model = parse_file(bundled_model_path(name))
        again = parse(serialize_model(model))
        assert sorted(again.graphs) == sorted(model.graphs)
        for gname in model.graphs:
            assert again.graphs[gname] == model.graphs[gname]
        assert [r.name for r in again.rules] == [r.name for r in model.rules]
        for r1, r2 in zip(model.rules, again.rules):
            assert r1.lhs == r2.lhs and r1.rhs == r2.rhs
            assert r1.span == r2.span
            assert len(r1.nacs) == len(r2.nacs)
            for n1, n2 in zip(r1.nacs, r2.nacs):
                assert isomorphic(n1.pattern, n2.pattern)
        assert again.analysis == model.analysis
