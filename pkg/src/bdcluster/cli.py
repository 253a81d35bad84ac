"""Command-line interface: validate, runs, graph, paths, seed, quiver,
bracket, hmap, verify.

Configuration is a JSON file like

    {"n": 7, "group": "SL",
     "rows": {"gamma1": [1,2,5], "gamma2": [1,3,4],
              "map": {"1": 4, "2": 3, "5": 1}},
     "cols": {"gamma1": [3,4,6], "gamma2": [2,3,5],
              "map": {"3": 2, "4": 3, "6": 5}}}

Exit codes: 0 success/pass, 1 verification failure, 2 invalid input,
3 non-generic input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bd import BDError, BDPair
from .bdgraph import BDGraph, NotAperiodic, decompose, is_aperiodic
from .blocks import seed_report
from .cluster import exotic_quiver, quiver_to_dot, quiver_to_json
from .linalg import NonGeneric, load_matrix, mat_to_strings
from .verify import (STANDARD_SUITES, SamplePlan, check_log_canonical,
                     run_suite)

EXIT_OK, EXIT_FAIL, EXIT_BAD_INPUT, EXIT_NON_GENERIC = 0, 1, 2, 3


def _load_pair(path: str) -> BDPair:
    with open(path) as fh:
        return BDPair.from_config(json.load(fh))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def cmd_validate(args) -> int:
    pair = _load_pair(args.config)
    report = {
        "n": pair.n,
        "x_row_runs": [list(r) for r in pair.x_row_runs().intervals],
        "x_col_runs": [list(r) for r in pair.x_col_runs().intervals],
        "y_row_runs": [list(r) for r in pair.y_row_runs().intervals],
        "y_col_runs": [list(r) for r in pair.y_col_runs().intervals],
        "row_components": [list(c) for c in pair.rows.components()],
        "col_components": [list(c) for c in pair.cols.components()],
        "aperiodic": is_aperiodic(pair),
    }
    _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK


def cmd_runs(args) -> int:
    pair = _load_pair(args.config)
    out = {
        "x_row_runs": [list(r) for r in pair.x_row_runs().intervals],
        "x_row_runs_dual": [list(r) for r in pair.x_row_runs().dual().intervals],
        "x_col_runs": [list(r) for r in pair.x_col_runs().intervals],
        "x_col_runs_dual": [list(r) for r in pair.x_col_runs().dual().intervals],
        "y_row_runs": [list(r) for r in pair.y_row_runs().intervals],
        "y_row_runs_dual": [list(r) for r in pair.y_row_runs().dual().intervals],
        "y_col_runs": [list(r) for r in pair.y_col_runs().intervals],
        "y_col_runs_dual": [list(r) for r in pair.y_col_runs().dual().intervals],
    }
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def cmd_graph(args) -> int:
    pair = _load_pair(args.config)
    g = BDGraph(pair)
    if args.dot or args.format == "dot":
        _emit(g.to_dot(), args.out)
    else:
        edges = [{"src": list(e.src), "dst": list(e.dst), "type": e.kind}
                 for e in g.edges]
        _emit(json.dumps({"n": pair.n, "edges": edges}, indent=2), args.out)
    return EXIT_OK


def cmd_paths(args) -> int:
    pair = _load_pair(args.config)
    dec = decompose(pair)
    out = {
        "paths": [p.label() for p in dec.paths],
        "cycles": [c.label() for c in dec.cycles],
        "aperiodic": dec.aperiodic,
    }
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK if dec.aperiodic else EXIT_FAIL


def cmd_seed(args) -> int:
    pair = _load_pair(args.config)
    _emit(json.dumps(seed_report(pair), indent=2), args.out)
    return EXIT_OK


def cmd_quiver(args) -> int:
    pair = _load_pair(args.config)
    q = exotic_quiver(pair)
    if args.format == "dot":
        _emit(quiver_to_dot(q), args.out)
    else:
        _emit(json.dumps(quiver_to_json(q), indent=2), args.out)
    return EXIT_OK


def cmd_bracket(args) -> int:
    pair = _load_pair(args.config)
    plan = SamplePlan(master_seed=args.seed, trials=1)
    if args.point:
        from .blocks import all_seed_functions
        from .verify import _omega_matrix

        Z = load_matrix(args.point)
        funcs = all_seed_functions(pair)
        keys = sorted(funcs)
        omega = _omega_matrix(pair, funcs, keys, Z, args.order)
        lines = ["i,j,k,l,log_bracket"]
        for (a, b), v in sorted(omega.items()):
            lines.append(f"{a[0]},{a[1]},{b[0]},{b[1]},{v}")
        _emit("\n".join(lines), args.out)
        return EXIT_OK
    rep = check_log_canonical(pair, plan)
    _emit(json.dumps(rep.to_json(), indent=2), args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_hmap(args) -> int:
    from .poissonmap import h_maps

    pair = _load_pair(args.config)
    U = load_matrix(args.point)
    hp = h_maps(pair, U)
    out = {
        "U": mat_to_strings(U),
        "H_r": mat_to_strings(hp.h_r),
        "H_c": mat_to_strings(hp.h_c),
        "h_of_U": mat_to_strings(hp.image),
    }
    _emit(json.dumps(out, indent=2), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    pair = _load_pair(args.config)
    names = STANDARD_SUITES if args.suite == "all" else args.suite.split(",")
    plan = SamplePlan(master_seed=args.seed, trials=args.trials)
    reports = run_suite(pair, names, plan)
    _emit(json.dumps([r.to_json() for r in reports], indent=2), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bdcluster", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="pair configuration JSON")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    common(sub.add_parser("validate", help="validate the pair, list runs and aperiodicity"))
    common(sub.add_parser("runs", help="run partitions and their duals"))

    sp = sub.add_parser("graph", help="emit the BD graph")
    common(sp)
    sp.add_argument("--dot", action="store_true")
    sp.add_argument("--format", choices=["dot", "json"], default="json")

    common(sub.add_parser("paths", help="maximal alternating paths and cycles"))
    common(sub.add_parser("seed", help="seed functions: blocks, anchors, degrees"))

    sp = sub.add_parser("quiver", help="emit the quiver")
    common(sp)
    sp.add_argument("--format", choices=["dot", "json"], default="json")

    sp = sub.add_parser("bracket", help="log-bracket matrix of the seed functions")
    common(sp)
    sp.add_argument("--point", default=None, help="matrix JSON file to evaluate at")
    sp.add_argument("--order", choices=["rows-cols", "cols-rows"], default="rows-cols")
    sp.add_argument("--seed", type=int, default=2024)

    sp = sub.add_parser("hmap", help="evaluate the Poisson map at a point")
    common(sp)
    sp.add_argument("--point", required=True, help="matrix JSON file")

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp)
    sp.add_argument("--suite", default="all",
                    help="comma-separated suite names or 'all'")
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--seed", type=int, default=2024)

    return p


COMMANDS = {
    "validate": cmd_validate, "runs": cmd_runs, "graph": cmd_graph,
    "paths": cmd_paths, "seed": cmd_seed, "quiver": cmd_quiver,
    "bracket": cmd_bracket, "hmap": cmd_hmap, "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (BDError, NotAperiodic, FileNotFoundError, json.JSONDecodeError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NonGeneric as exc:
        print(f"non-generic input: {exc}", file=sys.stderr)
        return EXIT_NON_GENERIC


if __name__ == "__main__":
    sys.exit(main())
