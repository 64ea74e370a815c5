"""Command-line front end.

Exit codes: 0 completed, 10 some initial graph can cover the error set,
11 iteration budget exhausted without convergence, 2 parse or model errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .backward import decide_cover, run
from .dot import to_dot
from .errors import UncoverkitError
from .forward import ExploreBounds, Witness, coverable_bounded
from .hypergraph import canonical_key
from .modelfile import ModelFile, graph_block_only, parse_file, serialize_graph
from .morphism import enumerate_matches
from .order import OrderKind, find_order_embedding
from .poc import PocRequest, minimal_pushout_complements

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COVERABLE = 10
EXIT_BUDGET = 11

_ORDER_WORD = {
    OrderKind.SUBGRAPH: "subgraph",
    OrderKind.INDUCED_SUBGRAPH: "induced",
    OrderKind.MINOR: "minor",
}


def _load(path: str) -> ModelFile:
    return parse_file(Path(path))


def _report(model_path, model, result, verdicts, elapsed) -> dict:
    basis = []
    for i, g in enumerate(sorted(result.basis, key=canonical_key)):
        name = f"basis{i}"
        basis.append(
            {
                "name": name,
                "key": canonical_key(g).hex(),
                "nodes": len(g.nodes),
                "edges": len(g.elabel),
                "graph": serialize_graph(name, g),
                "dot": to_dot(g, name),
            }
        )
    return {
        "model": Path(model_path).name,
        "order": _ORDER_WORD[model.analysis.order],
        "variant": model.analysis.variant,
        "restriction": model.analysis.restriction.describe(),
        "converged": result.converged,
        "iterations": result.iterations,
        "basis_size": len(result.basis),
        "basis": basis,
        "verdicts": [
            {
                "initial": name,
                "verdict": v.tag,
                "witness_iteration": v.witness_iteration,
            }
            for name, v in verdicts
        ],
        "trace": [
            {"iteration": rec.iteration, "basis_size": rec.basis_size, "changed": rec.changed}
            for rec in result.trace
        ],
        "timing": {"seconds": round(elapsed, 6)},
    }


def _cmd_analyze(args) -> int:
    model = _load(args.model)
    problem = model.to_problem(
        max_iterations=args.max_iter,
        q_closed_under_reachability=args.assume_q_closed,
    )
    start = time.perf_counter()
    result = run(problem)
    elapsed = time.perf_counter() - start
    verdicts = [
        (name, decide_cover(model.graphs[name], result, problem))
        for name in model.analysis.initial_names
    ]

    if args.emit_basis:
        outdir = Path(args.emit_basis)
        outdir.mkdir(parents=True, exist_ok=True)
        for i, g in enumerate(sorted(result.basis, key=canonical_key)):
            (outdir / f"basis{i}.gts").write_text(graph_block_only(g, f"basis{i}"))
            (outdir / f"basis{i}.dot").write_text(to_dot(g, f"basis{i}"))

    if args.json:
        print(json.dumps(_report(args.model, model, result, verdicts, elapsed),
                         indent=2, sort_keys=True))
    else:
        print(f"model: {args.model}")
        print(
            f"order: {_ORDER_WORD[problem.order]}  variant: {problem.variant}"
            f"  restriction: {problem.restriction.describe()}"
        )
        print(f"converged: {str(result.converged).lower()}  iterations: {result.iterations}")
        print(f"basis size: {len(result.basis)}")
        for name, verdict in verdicts:
            extra = (
                f" (first seen at iteration {verdict.witness_iteration})"
                if verdict.witness_iteration is not None
                else ""
            )
            print(f"initial '{name}': {verdict.tag}{extra}")
        print(f"time: {elapsed:.2f}s")

    if any(v.tag == "GeneralCoverable" for _, v in verdicts):
        return EXIT_COVERABLE
    if not result.converged:
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_simulate(args) -> int:
    model = _load(args.model)
    spec = model.analysis
    errors = [model.graphs[n] for n in spec.error_names]
    initials = spec.initial_names or []
    if args.start:
        initials = [args.start]
    if not initials:
        print("no initial graphs to simulate from", file=sys.stderr)
        return EXIT_USAGE
    bounds = ExploreBounds(
        max_depth=args.depth,
        max_states=args.max_states,
        max_nodes=args.max_nodes,
        max_edges=args.max_edges,
    )
    covered = False
    for name in initials:
        g0 = model.graph(name)
        outcome = coverable_bounded(g0, errors, spec.order, model.rules, bounds)
        if isinstance(outcome, Witness):
            covered = True
            trail = " ; ".join(step.describe() for step in outcome.steps) or "(already covering)"
            print(f"initial '{name}': coverable in {len(outcome.steps)} steps: {trail}")
        else:
            print(
                f"initial '{name}': not within bounds "
                f"(explored {outcome.explored} states, truncated: {outcome.truncated})"
            )
    return EXIT_COVERABLE if covered else EXIT_OK


def _cmd_order_check(args) -> int:
    model = _load(args.model)
    left = model.graph(args.left)
    right = model.graph(args.right)
    witness = find_order_embedding(left, right, model.analysis.order)
    if witness is None:
        print(f"{args.left} <= {args.right}: false")
    else:
        nm = ", ".join(f"{a}->{b}" for a, b in sorted(witness.node_map.items()))
        print(f"{args.left} <= {args.right}: true")
        print(f"witness nodes: {nm if nm else '(empty)'}")
    return EXIT_OK


def _cmd_poc(args) -> int:
    model = _load(args.model)
    rule = model.rule(args.rule)
    target = model.graph(args.target)
    spec = model.analysis
    comatches = enumerate_matches(rule.rhs, target)
    if not comatches:
        print("no co-matches of the rule's right-hand side into the target")
        return EXIT_OK
    seen: set[bytes] = set()
    count = 0
    for comatch in comatches:
        req = PocRequest(rule, comatch, spec.order, spec.variant, spec.restriction)
        for entry in minimal_pushout_complements(req).complements:
            key = canonical_key(entry.graph)
            if key in seen:
                continue
            seen.add(key)
            print(serialize_graph(f"poc{count}", entry.graph))
            count += 1
    print(f"# {count} minimal pushout complement(s)")
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    model = _load(args.model)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.model).stem
    names = [args.graph] if args.graph else sorted(model.graphs)
    for name in names:
        g = model.graph(name)
        path = outdir / f"{stem}_{name}.dot"
        path.write_text(to_dot(g, name))
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uncoverkit",
        description="Coverability analysis for graph transformation systems "
        "via backward search over well-quasi-orders.",
    )
    parser.add_argument("--version", action="version", version=f"uncoverkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the backward search on a model")
    p.add_argument("model")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--emit-basis", metavar="DIR")
    p.add_argument("--json", action="store_true")
    p.add_argument(
        "--assume-q-closed",
        action="store_true",
        help="assert that the restriction set is closed under reachability "
        "(upgrades variant-1 non-coverability verdicts)",
    )
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("simulate", help="bounded forward exploration from the initial graphs")
    p.add_argument("model")
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--start", metavar="GRAPH")
    p.add_argument("--max-states", type=int, default=2000)
    p.add_argument("--max-nodes", type=int, default=12)
    p.add_argument("--max-edges", type=int, default=24)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("order-check", help="decide the model's order between two graphs")
    p.add_argument("model")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=_cmd_order_check)

    p = sub.add_parser("poc", help="dump minimal pushout complements of a rule on a graph")
    p.add_argument("model")
    p.add_argument("--rule", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(fn=_cmd_poc)

    p = sub.add_parser("export-dot", help="render the model's graphs as DOT files")
    p.add_argument("model")
    p.add_argument("--graph", metavar="NAME")
    p.add_argument("--out", default=".")
    p.set_defaults(fn=_cmd_export_dot)

    return parser


def cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UncoverkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli())
if __name__ == "__main__":
    main()
