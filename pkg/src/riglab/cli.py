"""riglab command line: analyze, verify, bounds, generate.

Exit codes: 0 ok, 2 unreadable input or bad usage, 3 invalid instance,
4 a bound failed or two computations disagreed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .batch import VerifyConfig, ggraph_detail, run_verify
from .generate import (
    RandomParams,
    ReductionParams,
    random_ggraph,
    random_reduction_graph,
)
from .graphs import GraphError, betti
from .groups import GGraph, GroupError
from .pfister import (
    CurveDescriptor,
    index_bound,
    local_square_bound,
    nonreal_witness_tree,
    real_witness_tree,
    rho_trace,
    rho_upper_bound,
    witness_count,
)
from .reduction import (
    HOLDS,
    CrossCheckError,
    InvalidInstance,
    ReductionGraph,
    base_change,
    betti_monotone_check,
    check_nonrat_all,
    genus_budget_check,
    omega_P,
    omega_rat_int,
    rigidity_subcurves,
    singular_rigidity_orbit_count,
)
from .theorems import MUTANTS, THEOREMS, _jsonable, analyze_ggraph

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_VIOLATION = 0, 2, 3, 4


class ParseFailure(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(obj, fmt: str, out=None) -> None:
    text = _dump(obj) if fmt == "json" else _text(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key in sorted(obj) if isinstance(obj, dict) else range(len(obj)):
        val = obj[key]
        if isinstance(val, (dict, list)) and val and any(isinstance(v, (dict, list)) for v in
                                                           (val.values() if isinstance(val, dict) else val)):
            lines.append(f"{pad}{key}:")
            lines.append(_text(val, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else val}")
    return "\n".join(lines)


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseFailure(f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseFailure(f"{path}: expected a JSON object")
    return data


def _jobs(value) -> int:
    if value is None:
        value = os.environ.get("RIGLAB_JOBS", "1")
    try:
        jobs = int(value)
    except ValueError:
        raise ParseFailure(f"--jobs / RIGLAB_JOBS must be an integer, got {value!r}") from None
    if jobs < 1:
        raise ParseFailure("--jobs must be positive")
    return jobs


def analyze_ggraph_report(gg: GGraph, instance_id: str = "input") -> tuple[dict, bool]:
    report = analyze_ggraph(gg, instance_id)
    data = {"kind": "ggraph", "version": __version__, **report.to_json()}
    data["structure"] = ggraph_detail(gg)
    data["summary"] = {k: str(v) for k, v in report.verdicts.items()}
    return _jsonable(data), bool(report.violated)


def analyze_reduction_report(rg: ReductionGraph) -> tuple[dict, int]:
    bc = base_change(rg)
    gg_report, gg_bad = analyze_ggraph_report(bc.ggraph, "base_change")
    status = EXIT_OK
    data: dict = {"kind": "reduction", "version": __version__}
    try:
        n = singular_rigidity_orbit_count(rg)
        subs = rigidity_subcurves(rg)
    except CrossCheckError as exc:
        return {**data, "error": str(exc), "instance": rg.to_json()}, EXIT_VIOLATION
    nonrat = check_nonrat_all(rg)
    mono = betti_monotone_check(rg)
    budget = genus_budget_check(rg)
    lsb = local_square_bound(rg)
    data.update({
        "betti": betti(rg.underlying.underlying),
        "betti_prime": betti(bc.ggraph.graph),
        "omega_rat_int": sorted(omega_rat_int(rg)),
        "omega_nonreal": sorted(omega_P(rg, "nonreal")),
        "omega_empty": sorted(omega_P(rg, "empty")),
        "N": n,
        "subcurves": [{"components": list(s.components), "label": s.normal_closure_label, "singular": s.singular}
                      for s in subs],
        "base_change": {
            "vertices": bc.ggraph.graph.num_vertices,
            "edges": bc.ggraph.graph.num_edges,
            "cyan": len(bc.dual.cyan),
            "purple": len(bc.dual.purple),
            "group_order": bc.ggraph.group.order,
            "bounds": gg_report["verdicts"],
            "structure": gg_report["structure"],
        },
        "verdicts": {"nonrat": nonrat.to_json(), "betti_monotone": mono.to_json(),
                     "genus_budget": budget.to_json()},
        "local_square": {"exponent": lsb.exponent, "index": str(lsb.index), "budget": lsb.budget,
                         "consistent": lsb.consistent},
    })
    data["summary"] = {"nonrat": str(nonrat), "betti_monotone": str(mono), "genus_budget": str(budget)}
    if gg_bad or not nonrat.ok or not mono.ok:
        status = EXIT_VIOLATION
        data["instance"] = rg.to_json()
    elif budget.status != HOLDS and budget.status != "not applicable":
        status = EXIT_INVALID
    return _jsonable(data), status


def cmd_analyze(args) -> int:
    data = _load(args.path)
    try:
        if "galois" in data:
            report, status = analyze_reduction_report(ReductionGraph.from_json(data))
        else:
            report, bad = analyze_ggraph_report(GGraph.from_json(data))
            status = EXIT_VIOLATION if bad else EXIT_OK
    except (GraphError, GroupError, InvalidInstance) as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(report, args.format, args.out)
    return status


def cmd_verify(args) -> int:
    theorems = tuple(args.theorems.split(",")) if args.theorems else tuple(THEOREMS)
    unknown = [t for t in theorems if t not in THEOREMS]
    if unknown:
        raise ParseFailure(f"unknown theorem(s): {', '.join(unknown)}; choose from {', '.join(THEOREMS)}")
    mutants = tuple(args.mutant or ())
    for m in mutants:
        if m not in MUTANTS:
            raise ParseFailure(f"unknown mutant {m!r}; choose from {', '.join(MUTANTS)}")
    if not (args.exhaustive or args.random or args.reductions):
        raise ParseFailure("nothing to do: give --exhaustive, --random and/or --reductions")
    for name in ("exhaustive", "random", "reductions", "max_mult", "group_cap"):
        val = getattr(args, name)
        if val is not None and val < 0:
            raise ParseFailure(f"--{name.replace('_', '-')} must be nonnegative")
    cfg = VerifyConfig(exhaustive=args.exhaustive, max_mult=args.max_mult, group_cap=args.group_cap,
                       random=args.random, reductions=args.reductions, seed=args.seed,
                       theorems=theorems, mutants=mutants, records=args.records, labelled=args.labelled)
    report = run_verify(cfg, _jobs(args.jobs))
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(_dump(report) + "\n")
    summary = {
        "version": report["version"],
        "batches": {k: {"instances": v["instances"],
                        "violated": sum(c["violated"] + c["other"] for c in v["checks"].values())}
                    for k, v in report["batches"].items()},
        "violations": len(report["violations"]),
    }
    _emit(summary if args.report else report, args.format)
    for v in report["violations"][:5]:
        print(f"violation in {v['batch']} {v['id']}: {json.dumps(v.get('instance'), sort_keys=True)}",
              file=sys.stderr)
    return EXIT_VIOLATION if report["violations"] else EXIT_OK


def cmd_bounds(args) -> int:
    if args.n is None or args.n < 0 or args.genus < 0 or args.ell < 1:
        raise ParseFailure("--n and --genus must be nonnegative and --ell positive")
    c = CurveDescriptor(args.n, args.genus, args.real)
    rho = rho_upper_bound(c, args.ell)
    data = {"n": c.n, "genus": c.genus, "real": c.real, "ell": args.ell, "rho_bound": rho}
    line = f"rho_{args.ell} <= {rho}"
    if args.ell == 1:
        idx = index_bound(c)
        data["index_bound"] = str(idx)
        line += f", index <= {idx}"
        if args.index:
            data["index_value"] = idx.value
    if args.trace:
        data["trace"] = [{"rank": s.rank, "budget": s.budget, "entries": [list(e) for e in s.entries],
                          "value": s.value} for s in rho_trace(c, args.ell)]
    if args.witness:
        tree = real_witness_tree(c.genus, c.n) if c.real else nonreal_witness_tree(c.genus, c.n)
        data["witness"] = {"count": witness_count(tree), "tree": tree.to_json()}
    if args.format == "json":
        print(_dump(data))
        return EXIT_OK
    print(line)
    if args.index and args.ell == 1:
        print(f"index <= {data['index_value']}")
    if args.witness:
        print(f"witness valuations: {data['witness']['count']}")
        print(_dump(data["witness"]["tree"]))
    if args.trace:
        for step in data["trace"]:
            print(f"rank {step['rank']}: budget {step['budget']}, value {step['value']}")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.kind == "ggraph":
        inst = random_ggraph(args.seed, RandomParams(max_vertices=args.max_vertices)).to_json()
    else:
        inst = random_reduction_graph(args.seed, ReductionParams(max_components=args.max_components)).to_json()
    _emit(inst, "json", args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="riglab", description="Rigidity bounds for group actions on graphs and reduction graphs.")
    p.add_argument("--version", action="version", version=f"riglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="report on one G-graph or reduction-graph instance")
    a.add_argument("path")
    a.add_argument("--format", choices=("json", "text"), default="json")
    a.add_argument("--out")
    a.set_defaults(fn=cmd_analyze)

    v = sub.add_parser("verify", help="run exhaustive and seeded random verification batches")
    v.add_argument("--exhaustive", type=int, metavar="N", help="all connected multigraphs with <= N vertices")
    v.add_argument("--max-mult", type=int, default=2)
    v.add_argument("--group-cap", type=int, default=48)
    v.add_argument("--labelled", action="store_true", help="raw labelled enumeration, every subgroup")
    v.add_argument("--random", type=int, metavar="COUNT", help="seeded random G-graphs")
    v.add_argument("--reductions", type=int, metavar="COUNT", help="seeded random reduction graphs")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--theorems", help="comma-separated subset of " + ",".join(THEOREMS))
    v.add_argument("--mutant", action="append", help="swap in a deliberately broken check (self-test)")
    v.add_argument("--report", metavar="PATH", help="write the full JSON report here")
    v.add_argument("--records", action="store_true", help="include every per-instance record")
    v.add_argument("--jobs", help="worker processes (default: RIGLAB_JOBS or 1)")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.set_defaults(fn=cmd_verify)

    b = sub.add_parser("bounds", help="Pfister index bound for a function field over iterated Laurent series")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--genus", type=int, default=0)
    kind = b.add_mutually_exclusive_group()
    kind.add_argument("--real", dest="real", action="store_true")
    kind.add_argument("--nonreal", dest="real", action="store_false")
    b.add_argument("--ell", type=int, default=1)
    b.add_argument("--witness", action="store_true")
    b.add_argument("--index", action="store_true")
    b.add_argument("--trace", action="store_true")
    b.add_argument("--format", choices=("json", "text"), default="text")
    b.set_defaults(fn=cmd_bounds, real=False)

    g = sub.add_parser("generate", help="emit a seeded random instance")
    g.add_argument("kind", choices=("ggraph", "reduction"))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--max-vertices", type=int, default=10)
    g.add_argument("--max-components", type=int, default=5)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_generate)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        return args.fn(args)
    except ParseFailure as exc:
        print(f"riglab: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (GraphError, GroupError, InvalidInstance) as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
