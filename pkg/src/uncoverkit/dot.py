"""Graphviz DOT rendering of hypergraphs (for figures and reports)."""

from __future__ import annotations

from .hypergraph import Hypergraph


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _quote(s: str) -> str:
    return f'"{_escape(s)}"'


def _label(parts: list[str]) -> str:
    return '"' + "\\n".join(_escape(p) for p in parts) + '"'


def to_dot(g: Hypergraph, name: str = "g") -> str:
    """Render a hypergraph deterministically.

    Unary edges become part of the node label, binary edges become arrows,
    and wider hyperedges are drawn as box nodes with numbered tentacles.
    """
    unary: dict[str, list[str]] = {v: [] for v in g.nodes}
    for e in g.edge_ids():
        if len(g.conn[e]) == 1:
            unary[g.conn[e][0]].append(g.elabel[e])
    lines = [f"digraph {_quote(name)[1:-1]} {{", "  rankdir=LR;"]
    for v in g.node_ids():
        lines.append(
            f"  {_quote(v)} [shape=circle, label={_label([v, *sorted(unary[v])])}];"
        )
    for e in g.edge_ids():
        conn = g.conn[e]
        label = g.elabel[e]
        if len(conn) == 1:
            continue
        if len(conn) == 2:
            lines.append(
                f"  {_quote(conn[0])} -> {_quote(conn[1])} [label={_quote(label)}];"
            )
        else:
            hub = f"edge:{e}"
            lines.append(f"  {_quote(hub)} [shape=box, label={_quote(label)}];")
            for i, v in enumerate(conn):
                lines.append(f'  {_quote(hub)} -> {_quote(v)} [label="{i}", dir=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
