"""The .gts model format: signature, graphs, rules, analysis block.

Line comments start with ``#``.  Grammar sketch::

    sig <label> <arity>
    graph <name> { node <id>; edge <id> <label> (<id>,...); }
    rule <name> {
      lhs <graphname> | { ... };
      rhs <graphname> | { ... };
      map node <l>-><r>; map edge <l>-><r>;
      nac { edge <id> <label> (<id>,...); }
    }
    analysis {
      order subgraph|induced|minor; variant 1|2;
      restrict none|path <k>|pathmult <n> <k>;
      error <graphname>+; initial <graphname>*;
    }

Unmapped left-hand-side elements are deleted by the rule; NAC blocks add
forbidden edges between left-hand-side nodes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .backward import AnalysisProblem
from .errors import ModelError, ParseError
from .hypergraph import Hypergraph, RestrictionSpec, Signature, validate
from .morphism import NAC, PartialMorphism, Rule
from .order import OrderKind

_TOKEN = re.compile(r"->|[{}();,]|[^\s{}();,#]+")


@dataclass
class AnalysisSpec:
    order: OrderKind
    variant: int
    restriction: RestrictionSpec
    error_names: list[str]
    initial_names: list[str] = field(default_factory=list)


@dataclass
class ModelFile:
    signature: Signature
    graphs: dict[str, Hypergraph]
    rules: list[Rule]
    analysis: AnalysisSpec

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise ModelError(f"no rule named {name!r}")

    def graph(self, name: str) -> Hypergraph:
        if name not in self.graphs:
            raise ModelError(f"no graph named {name!r}")
        return self.graphs[name]

    def to_problem(
        self,
        max_iterations: int = 1000,
        q_closed_under_reachability: bool = False,
    ) -> AnalysisProblem:
        problem = AnalysisProblem(
            rules=self.rules,
            order=self.analysis.order,
            variant=self.analysis.variant,
            restriction=self.analysis.restriction,
            error_basis=[self.graphs[n] for n in self.analysis.error_names],
            max_iterations=max_iterations,
            initial_graphs=[self.graphs[n] for n in self.analysis.initial_names],
            q_closed_under_reachability=q_closed_under_reachability,
        )
        problem.validate()
        return problem


class _Tokens:
    def __init__(self, text: str):
        self.items: list[tuple[str, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            body = line.split("#", 1)[0].replace("->", " -> ")
            for tok in _TOKEN.findall(body):
                self.items.append((tok, lineno))
        self.pos = 0

    def peek(self) -> str | None:
        return self.items[self.pos][0] if self.pos < len(self.items) else None

    @property
    def line(self) -> int | None:
        if self.pos < len(self.items):
            return self.items[self.pos][1]
        return self.items[-1][1] if self.items else None

    def next(self, expect: str | None = None) -> str:
        if self.pos >= len(self.items):
            raise ParseError("unexpected end of file", self.items[-1][1] if self.items else None)
        tok, line = self.items[self.pos]
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, found {tok!r}", line)
        self.pos += 1
        return tok

    def next_nat(self) -> int:
        line = self.line
        tok = self.next()
        if not tok.isdigit():
            raise ParseError(f"expected a natural number, found {tok!r}", line)
        return int(tok)


def parse(text: str) -> ModelFile:
    """Parse a model file; raises ParseError / ModelError with positions."""
    toks = _Tokens(text)
    arities: dict[str, int] = {}
    graphs: dict[str, Hypergraph] = {}
    rule_blocks: list[tuple[str, int, dict]] = []
    analysis_raw: dict | None = None

    while toks.peek() is not None:
        line = toks.line
        kw = toks.next()
        if kw == "sig":
            label = toks.next()
            if label in arities:
                raise ParseError(f"duplicate label {label!r}", line)
            arities[label] = toks.next_nat()
        elif kw == "graph":
            name = toks.next()
            if name in graphs:
                raise ParseError(f"duplicate graph {name!r}", line)
            graphs[name] = _parse_graph_block(toks, arities, where=f"graph {name}")
        elif kw == "rule":
            name = toks.next()
            if any(name == b[0] for b in rule_blocks):
                raise ParseError(f"duplicate rule {name!r}", line)
            rule_blocks.append((name, line, _parse_rule_block(toks, arities)))
        elif kw == "analysis":
            if analysis_raw is not None:
                raise ParseError("duplicate analysis block", line)
            analysis_raw = _parse_analysis_block(toks)
        else:
            raise ParseError(f"unknown declaration {kw!r}", line)

    if not arities:
        raise ParseError("no signature declared (need at least one 'sig' line)")
    signature = Signature(arities)
    for name, g in graphs.items():
        graphs[name] = Hypergraph(signature, g.nodes, {e: (g.elabel[e], g.conn[e]) for e in g.elabel})
        validate(graphs[name])

    rules = [_assemble_rule(name, line, raw, signature, graphs) for name, line, raw in rule_blocks]

    if analysis_raw is None:
        raise ParseError("missing analysis block")
    analysis = _assemble_analysis(analysis_raw, graphs)

    if analysis.order is OrderKind.INDUCED_SUBGRAPH:
        bad = sorted(l for l, a in arities.items() if a != 2)
        if bad:
            raise ParseError(
                "order 'induced' needs every label to have arity 2 "
                f"(encode unary data as loops); offending labels: {', '.join(bad)}",
                analysis_raw["line"],
            )

    return ModelFile(signature, graphs, rules, analysis)


def parse_file(path) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _parse_graph_block(
    toks: _Tokens, arities: dict[str, int], where: str, foreign_nodes: bool = False
) -> Hypergraph:
    toks.next("{")
    nodes: list[str] = []
    edges: dict[str, tuple[str, tuple[str, ...]]] = {}
    while toks.peek() != "}":
        line = toks.line
        kw = toks.next()
        if kw == "node":
            name = toks.next()
            if name in nodes:
                raise ParseError(f"duplicate node {name!r} in {where}", line)
            nodes.append(name)
            toks.next(";")
        elif kw == "edge":
            name = toks.next()
            if name in edges:
                raise ParseError(f"duplicate edge {name!r} in {where}", line)
            label = toks.next()
            if label not in arities:
                raise ParseError(f"unknown label {label!r} in {where}", line)
            toks.next("(")
            endpoints = []
            while toks.peek() != ")":
                endpoints.append(toks.next())
                if toks.peek() == ",":
                    toks.next(",")
            toks.next(")")
            toks.next(";")
            if not foreign_nodes:
                for v in endpoints:
                    if v not in nodes:
                        raise ParseError(
                            f"edge {name!r} references undeclared node {v!r} in {where}",
                            line,
                        )
            if len(endpoints) != arities[label]:
                raise ParseError(
                    f"edge {name!r}: label {label!r} has arity {arities[label]}, "
                    f"got {len(endpoints)} endpoints",
                    line,
                )
            edges[name] = (label, tuple(endpoints))
        else:
            raise ParseError(f"expected 'node' or 'edge' in {where}, found {kw!r}", line)
    toks.next("}")
    # placeholder signature; re-attached once all sig lines are read
    return Hypergraph(Signature(arities or {"_": 0}), nodes, edges)


def _parse_side(toks: _Tokens, arities: dict[str, int], which: str):
    if toks.peek() == "{":
        g = _parse_graph_block(toks, arities, where=f"inline {which}")
        if toks.peek() == ";":
            toks.next(";")
        return g
    name = toks.next()
    toks.next(";")
    return name  # resolved later


def _parse_rule_block(toks: _Tokens, arities: dict[str, int]) -> dict:
    toks.next("{")
    raw: dict = {"lhs": None, "rhs": None, "node_map": {}, "edge_map": {}, "nacs": []}
    while toks.peek() != "}":
        line = toks.line
        kw = toks.next()
        if kw in ("lhs", "rhs"):
            if raw[kw] is not None:
                raise ParseError(f"duplicate {kw}", line)
            raw[kw] = _parse_side(toks, arities, kw)
        elif kw == "map":
            kind = toks.next()
            if kind not in ("node", "edge"):
                raise ParseError(f"expected 'node' or 'edge' after map, found {kind!r}", line)
            src = toks.next()
            toks.next("->")
            dst = toks.next()
            toks.next(";")
            table = raw["node_map"] if kind == "node" else raw["edge_map"]
            if src in table:
                raise ParseError(f"duplicate map for {kind} {src!r}", line)
            table[src] = dst
        elif kw == "nac":
            raw["nacs"].append(
                (line, _parse_graph_block(toks, arities, where="nac", foreign_nodes=True))
            )
        else:
            raise ParseError(f"unexpected {kw!r} in rule block", line)
    toks.next("}")
    if raw["lhs"] is None or raw["rhs"] is None:
        raise ParseError("rule needs both lhs and rhs")
    return raw


def _parse_analysis_block(toks: _Tokens) -> dict:
    start = toks.line
    toks.next("{")
    raw: dict = {"line": start, "order": None, "variant": None, "restrict": None,
                 "error": [], "initial": []}
    while toks.peek() != "}":
        line = toks.line
        kw = toks.next()
        if kw == "order":
            word = toks.next()
            mapping = {
                "subgraph": OrderKind.SUBGRAPH,
                "induced": OrderKind.INDUCED_SUBGRAPH,
                "minor": OrderKind.MINOR,
            }
            if word not in mapping:
                raise ParseError(f"unknown order {word!r}", line)
            raw["order"] = mapping[word]
            toks.next(";")
        elif kw == "variant":
            raw["variant"] = toks.next_nat()
            toks.next(";")
        elif kw == "restrict":
            word = toks.next()
            if word == "none":
                raw["restrict"] = RestrictionSpec.all_graphs()
            elif word == "path":
                raw["restrict"] = RestrictionSpec.path(toks.next_nat())
            elif word == "pathmult":
                n = toks.next_nat()
                k = toks.next_nat()
                raw["restrict"] = RestrictionSpec.path_mult(n, k)
            else:
                raise ParseError(f"unknown restriction {word!r}", line)
            toks.next(";")
        elif kw in ("error", "initial"):
            names = []
            while toks.peek() != ";":
                names.append(toks.next())
            toks.next(";")
            raw[kw].extend(names)
        else:
            raise ParseError(f"unexpected {kw!r} in analysis block", line)
    toks.next("}")
    return raw


def _assemble_rule(name, line, raw, signature, graphs) -> Rule:
    def side(which) -> Hypergraph:
        v = raw[which]
        if isinstance(v, str):
            if v not in graphs:
                raise ParseError(f"rule {name!r}: unknown graph {v!r} for {which}", line)
            return graphs[v]
        return Hypergraph(signature, v.nodes, {e: (v.elabel[e], v.conn[e]) for e in v.elabel})

    lhs, rhs = side("lhs"), side("rhs")
    validate(lhs)
    validate(rhs)
    for src, dst in raw["node_map"].items():
        if src not in lhs.nodes:
            raise ParseError(f"rule {name!r}: maps unknown lhs node {src!r}", line)
        if dst not in rhs.nodes:
            raise ParseError(f"rule {name!r}: maps to unknown rhs node {dst!r}", line)
    for src, dst in raw["edge_map"].items():
        if src not in lhs.elabel:
            raise ParseError(f"rule {name!r}: maps unknown lhs edge {src!r}", line)
        if dst not in rhs.elabel:
            raise ParseError(f"rule {name!r}: maps to unknown rhs edge {dst!r}", line)
    span = PartialMorphism(lhs, rhs, raw["node_map"], raw["edge_map"])

    nacs = []
    for nac_line, block in raw["nacs"]:
        extra = {e: (block.elabel[e], block.conn[e]) for e in block.elabel}
        for e, (label, conn) in extra.items():
            if e in lhs.elabel:
                raise ParseError(f"rule {name!r}: NAC edge {e!r} shadows an lhs edge", nac_line)
            for v in conn:
                if v not in lhs.nodes:
                    raise ParseError(
                        f"rule {name!r}: NAC edge {e!r} uses node {v!r} not in the lhs",
                        nac_line,
                    )
        if block.nodes - lhs.nodes:
            raise ParseError(
                f"rule {name!r}: NACs may only forbid edges, not add nodes", nac_line
            )
        pattern = Hypergraph(
            signature,
            lhs.nodes,
            {**{e: (lhs.elabel[e], lhs.conn[e]) for e in lhs.elabel}, **extra},
        )
        validate(pattern)
        embedding = PartialMorphism(
            lhs, pattern, {v: v for v in lhs.nodes}, {e: e for e in lhs.elabel}
        )
        nacs.append(NAC(pattern, embedding))

    rule = Rule(name, lhs, rhs, span, nacs)
    rule.check()  # raises IncidentNodeUndefined etc. at parse time
    return rule


def _assemble_analysis(raw, graphs) -> AnalysisSpec:
    if raw["order"] is None:
        raise ParseError("analysis block is missing 'order'", raw["line"])
    if raw["variant"] not in (1, 2):
        raise ParseError("analysis block needs 'variant 1' or 'variant 2'", raw["line"])
    if raw["restrict"] is None:
        raise ParseError("analysis block is missing 'restrict'", raw["line"])
    if not raw["error"]:
        raise ParseError("analysis block needs at least one error graph", raw["line"])
    for name in raw["error"] + raw["initial"]:
        if name not in graphs:
            raise ParseError(f"analysis references unknown graph {name!r}", raw["line"])
    return AnalysisSpec(
        order=raw["order"],
        variant=raw["variant"],
        restriction=raw["restrict"],
        error_names=raw["error"],
        initial_names=raw["initial"],
    )


# ---------------------------------------------------------------------------
# Serialization (round-trips up to isomorphism)


def serialize_graph(name: str, g: Hypergraph, indent: str = "") -> str:
    lines = [f"{indent}graph {name} {{"]
    for v in g.node_ids():
        lines.append(f"{indent}  node {v};")
    for e in g.edge_ids():
        conn = ",".join(g.conn[e])
        lines.append(f"{indent}  edge {e} {g.elabel[e]} ({conn});")
    lines.append(f"{indent}}}")
    return "\n".join(lines)


def serialize_signature(sig: Signature) -> str:
    return "\n".join(f"sig {label} {sig.arity(label)}" for label in sorted(sig.labels))


def graph_block_only(g: Hypergraph, name: str = "g") -> str:
    """A standalone parseable snippet: signature lines plus one graph block."""
    return serialize_signature(g.signature) + "\n\n" + serialize_graph(name, g) + "\n"


def _inline_block(g: Hypergraph, indent: str) -> list[str]:
    lines = ["{"]
    for v in g.node_ids():
        lines.append(f"{indent}  node {v};")
    for e in g.edge_ids():
        lines.append(f"{indent}  edge {e} {g.elabel[e]} ({','.join(g.conn[e])});")
    lines.append(f"{indent}}}")
    return lines


def serialize_rule(rule: Rule) -> str:
    lines = [f"rule {rule.name} {{"]
    lhs_block = _inline_block(rule.lhs, "  ")
    lines.append("  lhs " + lhs_block[0])
    lines.extend(lhs_block[1:])
    rhs_block = _inline_block(rule.rhs, "  ")
    lines.append("  rhs " + rhs_block[0])
    lines.extend(rhs_block[1:])
    for src in sorted(rule.span.node_map):
        lines.append(f"  map node {src}->{rule.span.node_map[src]};")
    for src in sorted(rule.span.edge_map):
        lines.append(f"  map edge {src}->{rule.span.edge_map[src]};")
    for nac in rule.nacs:
        inv = {w: v for v, w in nac.embedding.node_map.items()}
        lines.append("  nac {")
        for e in nac.extra_edges():
            conn = ",".join(inv[v] for v in nac.pattern.conn[e])
            lines.append(f"    edge {e} {nac.pattern.elabel[e]} ({conn});")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines)


def serialize_model(model: ModelFile) -> str:
    """Render a full model; re-parsing yields the same graphs and rules."""
    chunks = [serialize_signature(model.signature)]
    for name in sorted(model.graphs):
        chunks.append(serialize_graph(name, model.graphs[name]))
    for rule in model.rules:
        chunks.append(serialize_rule(rule))
    spec = model.analysis
    order_word = {
        OrderKind.SUBGRAPH: "subgraph",
        OrderKind.INDUCED_SUBGRAPH: "induced",
        OrderKind.MINOR: "minor",
    }[spec.order]
    restrict = {
        "all": "none",
        "path": f"path {spec.restriction.path_bound}",
        "pathmult": f"pathmult {spec.restriction.path_bound} {spec.restriction.mult_bound}",
    }[spec.restriction.kind]
    lines = [
        "analysis {",
        f"  order {order_word};",
        f"  variant {spec.variant};",
        f"  restrict {restrict};",
        f"  error {' '.join(spec.error_names)};",
    ]
    if spec.initial_names:
        lines.append(f"  initial {' '.join(spec.initial_names)};")
    lines.append("}")
    chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
