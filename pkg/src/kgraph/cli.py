"""The ``kgraph`` command line.

Every subcommand prints a JSON report on stdout and a one-line summary on
stderr.  Exit codes: 0 holds/pass, 1 fails (with witness), 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import generators as gen
from .category import KGraph, is_row_finite_no_sources, paths_of_degree
from .cube import normalize
from .dynamics import FAILS, HOLDS, INCONCLUSIVE, simplicity_verdict
from .errors import KGraphError
from .graph import parse_degree, validate_path
from .io import Instance, dumps, graph_to_dict, load, squares_to_list, to_dict
from .quotient import equivalent, witness_chain
from .skeleton import extract_skeleton, verify_rho
from .squares import check_associative, check_complete

EXIT = {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2, "error": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _edges(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _kgraph(instance: Instance) -> KGraph:
    return KGraph(instance.squares)


def _default(bound: str | None, k: int, value: int) -> tuple[int, ...]:
    return parse_degree(bound) if bound else (value,) * k


# -- commands ----------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    C = inst.squares
    complete = check_complete(C)
    report: dict[str, Any] = {
        "complete": complete.complete,
        "completeness_violations": [
            {"path": list(p), "owners": n} for p, n in complete.violations
        ],
    }
    if complete:
        assoc = check_associative(C, exhaustive=args.all)
        report["associative"] = assoc.associative
        report["associativity_violations"] = [v.as_dict() for v in assoc.violations]
    else:
        report["associative"] = None
    rf = is_row_finite_no_sources(inst.graph)
    report["row_finite_no_sources"] = rf.holds
    report["missing_colours"] = [list(x) for x in rf.violations]
    ok = complete.complete and report["associative"]
    status = HOLDS if ok else FAILS
    summary = "valid: complete and associative" if ok else "invalid square collection"
    return status, report, summary


def cmd_normalize(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    L = _kgraph(inst)
    path = validate_path(inst.graph, _edges(args.path), args.vertex)
    lam = normalize(L.collection, path)
    return HOLDS, lam.encode(), f"normalised to a cube of degree {list(lam.degree)}"


def cmd_equiv(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    L = _kgraph(inst)
    x = validate_path(inst.graph, _edges(args.x), args.vertex)
    y = validate_path(inst.graph, _edges(args.y), args.vertex)
    same = equivalent(L.collection, x, y)
    report: dict[str, Any] = {"equivalent": same}
    if same and args.witness:
        report["witness"] = witness_chain(L.collection, x, y).as_dict()
    if not same:
        report["reason"] = "different cubes"
        report["x_degree"] = list(x.shape())
        report["y_degree"] = list(y.shape())
    return (HOLDS if same else FAILS), report, "equivalent" if same else "not equivalent"


def cmd_enumerate(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    L = _kgraph(inst)
    if args.budget:
        L.enumeration_budget = args.budget
    m = parse_degree(args.degree)
    if len(m) != L.k:
        raise UsageError(f"degree needs {L.k} entries")
    paths = paths_of_degree(L, args.vertex, m)
    report = {"degree": list(m), "vertex": args.vertex, "count": len(paths),
              "paths": [lam.encode() for lam in paths]}
    return HOLDS, report, f"{len(paths)} paths of degree {list(m)}"


def cmd_skeleton(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    S = extract_skeleton(_kgraph(inst))
    report = graph_to_dict(S.graph)
    report["squares"] = squares_to_list(S.squares)
    v, e, s = S.counts()
    return HOLDS, report, f"skeleton: {v} vertices, {e} edges, {s} squares"


def cmd_roundtrip(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    result = verify_rho(inst.graph, inst.squares)
    return (HOLDS if result else FAILS), result.as_dict(), "round trip passed" if result else "round trip FAILED"


def cmd_analyze(args: argparse.Namespace) -> tuple[str, dict, str]:
    inst = load(args.instance)
    L = _kgraph(inst)
    k = L.k
    verdict = simplicity_verdict(
        L,
        _default(args.pair_bound, k, 2),
        _default(args.path_bound, k, 4),
        _default(args.n_bound, k, 4),
    )
    words = {HOLDS: "simple (up to bounds)", FAILS: "not simple", INCONCLUSIVE: "inconclusive"}
    return verdict.status, verdict.as_dict(), words[verdict.status]


def _factor(text: str):
    kind, _, size = text.partition(":")
    n = int(size or 1)
    if kind == "bouquet":
        return gen.bouquet(n, prefix="x")
    if kind == "cycle":
        return gen.cycle(n)
    raise UsageError(f"unknown factor {text!r}; use bouquet:N or cycle:N")


def cmd_gen(args: argparse.Namespace) -> tuple[str, dict, str]:
    kind = args.kind
    seed = None
    if kind == "omega":
        m = parse_degree(args.m)
        pair = gen.omega(len(m), m)
        name = f"omega{list(m)}"
    elif kind == "product":
        factors = []
        for i, text in enumerate(args.factor or ["bouquet:1", "bouquet:1"]):
            g = _factor(text)
            vertices = [f"{v}.{i + 1}" for v in g.vertices]
            g = gen.one_graph(vertices, [(f"{e.id}.{i + 1}", f"{e.range}.{i + 1}", f"{e.source}.{i + 1}")
                                         for e in g.edges.values()])
            factors.append(g)
        pair = gen.product_of_1graphs(factors)
        name = "product " + " x ".join(args.factor or ["bouquet:1", "bouquet:1"])
    elif kind == "basic-data":
        T = [tuple(int(a) for a in p.split(",")) for p in args.T.split(";")]
        w_values = [int(a) for a in args.w.split(",")]
        if len(w_values) != len(T):
            raise UsageError("--w needs one value per point of --T")
        points = sorted(T)
        data = gen.BasicData(frozenset(T), args.q, args.t, dict(zip(points, w_values)))
        pair = gen.basic_data_2graph(data)
        name = f"basic data q={args.q} t={args.t}"
    else:
        seed = args.seed
        pair = gen.random_instance(args.k, args.vertices, args.max_in, seed=seed)
        name = f"random k={args.k}"
    inst = Instance.of(pair, name=name, provenance=f"kgraph gen {kind}", seed=seed)
    text = dumps(inst)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    g = inst.graph
    summary = f"generated {len(g.vertices)} vertices, {len(g.edges)} edges, {len(inst.squares.squares)} squares"
    return HOLDS, to_dict(inst), summary


# -- wiring ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kgraph", description="k-graphs from coloured graphs and squares.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check completeness and associativity")
    p.add_argument("instance")
    p.add_argument("--all", action="store_true", help="report every cube violation")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("normalize", help="the cube traversed by a path")
    p.add_argument("instance")
    p.add_argument("--path", required=True, help="comma-separated edge ids")
    p.add_argument("--vertex", help="vertex for the empty path")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("equiv", help="decide whether two paths are equivalent")
    p.add_argument("instance")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--vertex")
    p.add_argument("--witness", action="store_true", help="include a flip chain")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("enumerate", help="list v Lambda^m")
    p.add_argument("instance")
    p.add_argument("--vertex")
    p.add_argument("--degree", required=True, help="e.g. 2,1")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("skeleton", help="emit the skeleton as an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("verify-roundtrip", help="check the isomorphism onto the skeleton")
    p.add_argument("instance")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("analyze", help="aperiodicity, cofinality and the simplicity verdict")
    p.add_argument("instance")
    p.add_argument("--pair-bound")
    p.add_argument("--path-bound")
    p.add_argument("--n-bound")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("kind", choices=["omega", "product", "basic-data", "random"])
    p.add_argument("--m", default="1,1", help="omega: the degree m")
    p.add_argument("--factor", action="append", help="product: bouquet:N or cycle:N, once per colour")
    p.add_argument("--T", default="0,0;1,0;0,1", help="basic-data: points of T separated by ';'")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--t", type=int, default=0)
    p.add_argument("--w", default="1,1,1", help="basic-data: weights in sorted order of T")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--vertices", type=int, default=2)
    p.add_argument("--max-in", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the instance to this file")
    p.set_defaults(func=cmd_gen)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[int, dict]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status, report, summary = args.func(args)
    except UsageError as exc:
        status, report, summary = "error", {"error": str(exc)}, f"usage error: {exc}"
    except (KGraphError, ValueError, KeyError, OSError) as exc:
        status, report, summary = "error", {"error": str(exc), "type": type(exc).__name__}, f"input error: {exc}"
    report = {"status": status, **report} if "status" not in report else report
    print(json.dumps(report, indent=2))
    print(summary, file=sys.stderr)
    return EXIT[status], report


def main(argv: Sequence[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
