"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 a check failed (the JSON
report on stdout says which).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bessel, counting, graphs, randwalk, spectral, tree
from .qsurd import QSurd
from .tables import KernelTable, fraction_str

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _exact_str(x) -> str:
    if isinstance(x, QSurd):
        if x.is_rational:
            return fraction_str(x.to_fraction())
        return f"{fraction_str(x.a)} + {fraction_str(x.b)}*sqrt({x.q})"
    return fraction_str(x)


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    _write(text, out)


def _write(text: str, out=None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s]


def builtin_graph(source: str) -> graphs.RegularGraph:
    """Build a graph from ``family[:arg[:arg...]]``, e.g. ``circulant:10:1,2``."""
    name, *args = source.split(":")
    try:
        if name == "petersen" and not args:
            return graphs.petersen()
        if name in ("cycle", "complete", "hypercube") and len(args) == 1:
            return graphs.generate(name, int(args[0]))
        if name == "circulant" and len(args) == 2:
            return graphs.circulant(int(args[0]), _int_list(args[1]))
        if name == "random_regular" and len(args) == 3:
            return graphs.random_regular(int(args[0]), int(args[1]), int(args[2]))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unrecognized graph {source!r}: give a JSON file or a built-in like petersen, complete:4")


def resolve_graph(source: str) -> graphs.RegularGraph:
    if os.path.exists(source):
        with open(source) as fh:
            return graphs.load_graph(fh.read())
    return builtin_graph(source)


def load_coefficients(path: str) -> spectral.TaylorCoefficients:
    """Coefficient file: a JSON list of ``g(0), g(1), ...`` or a family object."""
    with open(path) as fh:
        doc = json.load(fh)
    if isinstance(doc, list):
        return spectral.TaylorCoefficients.from_values(doc)
    if isinstance(doc, dict):
        family = doc.get("family")
        if family == "geometric":
            return spectral.TaylorCoefficients.geometric(float(Fraction(str(doc["ratio"]))))
        if family == "inverse_factorial":
            return spectral.TaylorCoefficients.inverse_factorial()
        if family == "point_mass":
            return spectral.TaylorCoefficients.point_mass(int(doc["t"]))
    raise UsageError(f"unrecognized coefficient file {path!r}")


# -- subcommands -----------------------------------------------------------

def cmd_bessel(args) -> int:
    if (args.c is None) == (args.q is None):
        raise UsageError("give exactly one of --c or --q")
    if args.q is not None:
        if args.q < 1:
            raise UsageError("--q must be >= 1")
        c = QSurd(0, Fraction(-2, args.q), args.q)
        label = f"-2/sqrt({args.q})"
    else:
        c = Fraction(args.c)
        label = fraction_str(c)
    poly = bessel.bessel_poly(args.n, args.t, c)
    jac = bessel.bessel_jacobi(args.n, args.t, c)
    rec = bessel.bessel_recurrence_table(args.n, args.t, c)[args.n][args.t]
    agree = poly == jac == rec
    _emit({
        "n": args.n,
        "t": args.t,
        "c": label,
        "exact": _exact_str(poly),
        "float": float(poly),
        "jacobi": _exact_str(jac),
        "recurrence": _exact_str(rec),
        "agree": agree,
    }, args.out)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_tree_kernel(args) -> int:
    size = max(args.rmax, args.tmax)
    oracle = tree.tree_heat_oracle(args.q, size, args.tmax)
    rows = tuple(
        tuple(tree.tree_heat_kernel(args.q, r, t) for t in range(args.tmax + 1)) for r in range(args.rmax + 1)
    )
    table = KernelTable(0, args.tmax, rows)
    bad = [(r, t) for r in range(args.rmax + 1) for t in range(args.tmax + 1) if table[r, t] != oracle[r, t]]
    if bad:
        r, t = bad[0]
        _emit({"passed": False, "radius": r, "t": t,
               "closed_form": fraction_str(table[r, t]), "oracle": fraction_str(oracle[r, t])})
        return EXIT_FAILED
    _write(table.to_csv(index_name="radius"), args.out)
    return EXIT_OK


def cmd_graph_kernel(args) -> int:
    g = resolve_graph(args.graph)
    if not 0 <= args.basepoint < g.vertex_count:
        raise UsageError(f"basepoint {args.basepoint} not a vertex")
    x0, t_max = args.basepoint, args.tmax
    power = spectral.heat_kernel_power(g, x0, t_max)
    decomposition = spectral.eigendecompose(g)
    err = max(
        abs(spectral.heat_kernel_spectral(decomposition, x0, x, t) - power[x, t]) / max(1.0, abs(power[x, t]))
        for x in range(g.vertex_count)
        for t in range(t_max + 1)
    )
    report = {
        "graph": g.name or args.graph,
        "basepoint": x0,
        "t_max": t_max,
        "diagonal": [fraction_str(power[x0, t]) for t in range(t_max + 1)],
        "spectral_max_rel_error": float(f"{err:.3e}"),
        "spectral_agree": err <= 1e-6,
    }
    if g.is_simple:
        geometric = spectral.heat_kernel_geometric_table(g, x0, t_max)
        report["geometric_agree"] = geometric == power
        report["diagonal_formula_agree"] = all(
            spectral.heat_kernel_diagonal(g, x0, t) == power[x0, t] for t in range(t_max + 1)
        )
    else:
        report["geometric_agree"] = None
        report["diagonal_formula_agree"] = None
    report["passed"] = report["spectral_agree"] and report["geometric_agree"] is not False
    _emit(report, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAILED


def cmd_trace_check(args) -> int:
    g = resolve_graph(args.graph)
    report = spectral.trace_formula_check(g, args.tmax)
    _emit({"graph": g.name or args.graph, **report.to_dict()}, args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_general_trace(args) -> int:
    g = resolve_graph(args.graph)
    coeffs = load_coefficients(args.coefficients)
    report = spectral.general_trace_check(g, coeffs, b=args.b, nodes=args.nodes, a=args.a)
    _emit({"graph": g.name or args.graph, **report.to_dict()}, args.out)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_count_geodesics(args) -> int:
    g = resolve_graph(args.graph)
    report = counting.counting_report(g, args.mmax)
    _emit({"graph": g.name or args.graph, **report}, args.out)
    return EXIT_OK if report["agree"] else EXIT_FAILED


def cmd_random_walk(args) -> int:
    g = resolve_graph(args.graph)
    if not 0 <= args.basepoint < g.vertex_count:
        raise UsageError(f"basepoint {args.basepoint} not a vertex")
    config = randwalk.WalkConfig(seed=args.seed, trials=args.trials, workers=args.workers)
    exact = randwalk.ReturnDistribution.exact(randwalk.rw_kernel_markov(g, args.basepoint, args.tmax))
    empirical = randwalk.rw_simulate(g, args.basepoint, args.tmax, config)
    _write(empirical.to_csv(exact), args.out)
    return EXIT_OK


def cmd_halfline(args) -> int:
    params = tree.HalfLineParams(args.alpha, args.beta)
    oracle = tree.halfline_oracle(params, args.tmax, args.tmax)
    rows = []
    worst = 0.0
    for x in range(args.tmax + 1):
        for t in range(args.tmax + 1):
            v = tree.halfline_diffusion(params, x, t)
            worst = max(worst, abs(v - oracle[x][t]))
            rows.append({"x": x, "t": t, "closed_form": v, "oracle": oracle[x][t]})
    passed = worst <= 1e-10
    _emit({"alpha": args.alpha, "beta": args.beta, "t_max": args.tmax,
           "max_abs_error": float(f"{worst:.3e}"), "passed": passed, "rows": rows}, args.out)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_generate(args) -> int:
    family = args.family
    try:
        if family == "petersen":
            g = graphs.petersen()
        elif family in ("cycle", "complete"):
            g = graphs.generate(family, _need(args.n, "--n"))
        elif family == "hypercube":
            g = graphs.hypercube(_need(args.d, "--d"))
        elif family == "circulant":
            g = graphs.circulant(_need(args.n, "--n"), _int_list(_need(args.offsets, "--offsets")))
        elif family == "random_regular":
            g = graphs.random_regular(_need(args.n, "--n"), _need(args.degree, "--degree"), _need(args.seed, "--seed"))
        else:
            raise UsageError(f"unknown family {family!r}")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(graphs.graph_to_json(g), args.out)
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="heatgraph", description="Discrete-time heat kernels on regular graphs and trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="write output to this file instead of stdout")
        return sp

    sp = add("bessel", cmd_bessel, "evaluate I_n^c(t) by three routes")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--c", help="rational c such as 1/2 (write negatives as --c=-1/2)")
    sp.add_argument("--q", type=int, help="use c = -2/sqrt(q)")

    sp = add("tree-kernel", cmd_tree_kernel, "exact heat kernel on the (q+1)-regular tree (CSV)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--rmax", type=int, required=True)
    sp.add_argument("--tmax", type=int, required=True)

    graph_help = "graph JSON file or built-in (petersen, complete:4, cycle:8, hypercube:3, circulant:10:1,2, random_regular:12:4:1)"

    sp = add("graph-kernel", cmd_graph_kernel, "compare heat-kernel routes on a graph")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--tmax", type=int, required=True)

    sp = add("trace-check", cmd_trace_check, "exact trace formula check")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--tmax", type=int, required=True)

    sp = add("general-trace", cmd_general_trace, "trace formula for a test sequence via contour integrals")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--coefficients", required=True, help="JSON list or family object")
    sp.add_argument("--b", type=float, help="contour radius")
    sp.add_argument("--a", type=float, help="holomorphy radius used for the admissible interval")
    sp.add_argument("--nodes", type=int, help="fixed quadrature node count (power of two >= 256)")

    sp = add("count-geodesics", cmd_count_geodesics, "closed geodesic counts by four routes")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--mmax", type=int, required=True)

    sp = add("random-walk", cmd_random_walk, "Monte Carlo return probabilities (CSV)")
    sp.add_argument("--graph", required=True, help=graph_help)
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--tmax", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("halfline", cmd_halfline, "half-line diffusion against its iteration")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--tmax", type=int, required=True)

    sp = add("generate", cmd_generate, "write a built-in graph as JSON")
    sp.add_argument("--family", required=True,
                    choices=["cycle", "complete", "petersen", "hypercube", "circulant", "random_regular"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int, help="hypercube dimension")
    sp.add_argument("--degree", type=int)
    sp.add_argument("--offsets", help="comma-separated circulant offsets")
    sp.add_argument("--seed", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("tmax", "mmax", "n", "t", "rmax", "trials"):
        value = getattr(args, name, None)
        if isinstance(value, int) and value < 0:
            print(f"heatgraph: error: --{name} must be non-negative", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, graphs.GraphError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"heatgraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
