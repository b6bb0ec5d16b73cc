"""Command-line entry point.

Subcommands: moments, transform, dyck, algebraic, density, simulate,
compare.  Exit codes: 0 success, 2 usage or input validation error,
3 budget or feasibility refusal, 4 numeric non-convergence.

Outputs are bit-identical across runs for a fixed configuration and
seed.  The environment variable LS_THREADS caps trial parallelism.
"""

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .partitions import (PartitionError, parse_partition,
                         self_conjugate_from_heights, dilate, null_space_dim)
from .enumeration import (BudgetError, PlaneTree, count_recurrence,
                          count_summation, count_fat_hook, enumerate_brute,
                          moment_sequence)
from .dyckpaths import DyckPath, count_paths, path_to_tree, tree_to_path
from .powerseries import (SeriesError, moments_to_cauchy, cauchy_to_r, r_to_s)
from .spectral_analytic import (DegreeGuardError, NonConvergenceError,
                                eliminate, fat_hook_density, fat_hook_support,
                                stieltjes_density)
from . import matrix_mc
from .svgplot import histogram_with_curve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4

SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


def _fmt_float(x):
    return f"{float(x):.17g}"


def _fmt_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_shape(args, need_self_conjugate=True):
    part = getattr(args, "partition", None)
    heights = getattr(args, "heights", None)
    if (part is None) == (heights is None):
        raise UsageError("give exactly one of --partition or --heights")
    if heights is not None:
        vals = [int(v) for v in heights.replace(" ", "").split(",") if v]
        return self_conjugate_from_heights(vals)
    p = parse_partition(part)
    if need_self_conjugate and not p.is_self_conjugate():
        raise UsageError("partition is not self-conjugate")
    return p


def _add_shape_flags(sub):
    sub.add_argument("--partition", help="comma-separated part list")
    sub.add_argument("--heights",
                     help="comma-separated block heights of a self-conjugate shape")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_moments(args):
    p = _resolve_shape(args)
    kmax = args.kmax
    methods = (["recurrence", "summation", "hypergeometric", "brute"]
               if args.method == "all" else [args.method])
    table = count_recurrence(p, kmax)  # reference for moments and agreement
    columns = {}
    if "recurrence" in methods:
        columns["count_recurrence"] = list(table.counts)
    if "summation" in methods:
        columns["count_summation"] = [count_summation(p.heights, k)
                                      for k in range(kmax + 1)]
    if "hypergeometric" in methods:
        if p.blocks == 2:
            columns["count_hypergeometric"] = [
                count_fat_hook(p.heights[0], p.heights[1], k)
                for k in range(kmax + 1)]
        elif args.method == "hypergeometric":
            raise UsageError("hypergeometric counting needs a two-block shape")
    if "brute" in methods:
        if args.method == "brute":
            columns["count_brute"] = [len(enumerate_brute(p, k, args.budget))
                                      for k in range(kmax + 1)]
        else:
            try:
                columns["count_brute"] = [len(enumerate_brute(p, k, args.budget))
                                          for k in range(kmax + 1)]
            except BudgetError as err:
                print(f"note: brute enumeration skipped ({err})", file=sys.stderr)
    reference = list(table.counts)
    for name, vals in columns.items():
        if vals != reference:
            raise RuntimeError(f"method disagreement in column {name}")
    header = ["k"] + list(columns) + ["moment", "moment_decimal"]
    lines = [",".join(header)]
    for k in range(kmax + 1):
        row = [str(k)] + [str(columns[name][k]) for name in columns]
        m = table.moments[k]
        row += [_fmt_rational(m), _fmt_float(m)]
        lines.append(",".join(row))
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_transform(args):
    p = _resolve_shape(args)
    order = args.order
    if args.what == "G":
        series = moments_to_cauchy(moment_sequence(p, order), order)
        var = "w"
    else:
        g = moments_to_cauchy(moment_sequence(p, order + 2), order + 2)
        series = cauchy_to_r(g)
        var = "z"
        if args.what == "S":
            series = r_to_s(series)
    lines = [f"k,coefficient_of_{var}^k"]
    for k, c in enumerate(series.coeffs):
        lines.append(f"{k},{_fmt_rational(c)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_dyck_convert(args):
    with open(args.infile) as fh:
        payload = json.load(fh)
    p = parse_partition(payload["partition"])
    if not p.is_self_conjugate():
        raise UsageError("partition is not self-conjugate")
    if args.direction == "tree2path":
        tree = PlaneTree(payload["tree"]["child_counts"],
                         payload["tree"]["labels"])
        path = tree_to_path(p, tree)
        out = {"schema": SCHEMA_VERSION, "partition": str(p),
               "path": path.to_payload()}
    else:
        path = DyckPath.from_payload(payload["path"])
        tree = path_to_tree(p, path)
        out = {"schema": SCHEMA_VERSION, "partition": str(p),
               "tree": {"child_counts": list(tree.child_counts),
                        "labels": list(tree.labels)}}
    _write_text(args.out, json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_dyck_count(args):
    p = _resolve_shape(args)
    print(count_paths(p, args.k, args.budget))
    return EXIT_OK


def _cmd_algebraic(args):
    vals = [int(v) for v in args.heights.replace(" ", "").split(",") if v]
    counting_poly, cauchy_poly = eliminate(vals)
    lines = []
    for (i, j) in sorted(cauchy_poly.terms):
        lines.append(f"({i},{j}): {int(cauchy_poly.terms[(i, j)])}")
    payload = {
        "schema": SCHEMA_VERSION,
        "heights": vals,
        "degree_G": cauchy_poly.degree_g(),
        "degree_z": cauchy_poly.degree_z(),
        "cauchy_poly": {f"{i},{j}": str(int(v))
                        for (i, j), v in sorted(cauchy_poly.terms.items())},
        "counting_poly": {f"{i},{j}": str(int(v))
                          for (i, j), v in sorted(counting_poly.terms.items())},
    }
    text = "\n".join(lines) + "\n" + json.dumps(payload, sort_keys=True) + "\n"
    _write_text(args.out, text)
    return EXIT_OK


def _density_fn(p):
    if p.blocks == 2:
        a1, a2 = p.heights
        return lambda x: fat_hook_density(a1, a2, x)
    return lambda x: stieltjes_density(p.heights, x) if x > 0 else 0.0


def _default_xmax(p):
    if p.blocks == 2:
        return 1.05 * fat_hook_support(p.heights[0], p.heights[1]).z_plus
    return 4.0 * p.length  # hard support bound for any shape


def _cmd_density(args):
    p = _resolve_shape(args)
    xmin = args.xmin if args.xmin is not None else 0.0
    xmax = args.xmax if args.xmax is not None else _default_xmax(p)
    if not xmax > xmin:
        raise UsageError("need xmax > xmin")
    ladder = None
    if args.eps_ladder:
        ladder = tuple(float(v) for v in args.eps_ladder.split(","))
    xs = np.linspace(xmin, xmax, args.grid)
    lines = ["x,f"]
    if p.blocks == 2:
        a1, a2 = p.heights
        fn = lambda x: fat_hook_density(a1, a2, x)
    else:
        fn = lambda x: (stieltjes_density(p.heights, x, eps_ladder=ladder)
                        if x > 0 else 0.0)
    for x in xs:
        lines.append(f"{_fmt_float(x)},{_fmt_float(fn(float(x)))}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _hist_csv(sample):
    lines = ["bin_left,bin_right,mass"]
    for left, right, mass in zip(sample.hist_edges[:-1],
                                 sample.hist_edges[1:], sample.hist_masses):
        lines.append(f"{_fmt_float(left)},{_fmt_float(right)},{_fmt_float(mass)}")
    return "\n".join(lines) + "\n"


def _cmd_simulate(args):
    p = _resolve_shape(args)
    sample = matrix_mc.run_experiment(
        p, args.N, args.trials, args.seed, bins=args.bins, kmax=args.kmax,
        law=args.law)
    _write_text(args.out, _hist_csv(sample))
    if args.emit_moments:
        lines = ["k,mean,stderr"]
        for k in range(1, args.kmax + 1):
            lines.append(f"{k},{_fmt_float(sample.moment_means[k - 1])},"
                         f"{_fmt_float(sample.moment_stderrs[k - 1])}")
        _write_text(args.emit_moments, "\n".join(lines) + "\n")
    return EXIT_OK


def _simpson_bin_mass(fn, left, right, subdiv=4):
    xs = np.linspace(left, right, 2 * subdiv + 1)
    ys = np.array([fn(float(x)) for x in xs])
    h = (right - left) / (2 * subdiv)
    return float(h / 3.0 * (ys[0] + ys[-1] + 4 * ys[1:-1:2].sum()
                            + 2 * ys[2:-2:2].sum()))


def _cmd_compare(args):
    p = _resolve_shape(args)
    sample = matrix_mc.run_experiment(
        p, args.N, args.trials, args.seed, bins=args.bins, kmax=args.kmax,
        law=args.law)
    fn = _density_fn(p)
    edges = sample.hist_edges
    widths = np.diff(edges)

    # continuous part of the empirical spectrum: drop near-zero eigenvalues
    eigs = sample.eigenvalues
    cutoff = matrix_mc.RANK_TOL_FACTOR * float(eigs[-1])
    cont = eigs[eigs >= cutoff]
    counts, _ = np.histogram(cont, bins=edges)
    emp_masses = counts / eigs.size
    ana_masses = np.array([_simpson_bin_mass(fn, float(l), float(r))
                           for l, r in zip(edges[:-1], edges[1:])])
    l1 = float(np.sum(np.abs(emp_masses - ana_masses)))

    combined = ["bin_left,bin_right,empirical_mass,analytic_mass"]
    for left, right, em, am in zip(edges[:-1], edges[1:], emp_masses,
                                   ana_masses):
        combined.append(f"{_fmt_float(left)},{_fmt_float(right)},"
                        f"{_fmt_float(em)},{_fmt_float(am)}")
    _write_text(f"{args.out_prefix}.csv", "\n".join(combined) + "\n")

    analytic_moments = [float(m) for m in moment_sequence(p, args.kmax)[1:]]
    moment_rows = []
    for k in range(1, args.kmax + 1):
        emp = sample.moment_means[k - 1]
        gap = abs(emp - analytic_moments[k - 1])
        moment_rows.append({
            "k": k, "empirical": emp,
            "stderr": sample.moment_stderrs[k - 1],
            "analytic": analytic_moments[k - 1], "abs_gap": gap,
        })
    atom_analytic = null_space_dim(dilate(p, args.N)) / (args.N * p.length)
    summary = {
        "schema": SCHEMA_VERSION,
        "shape": str(p),
        "heights": list(p.heights),
        "N": args.N,
        "trials": args.trials,
        "seed": args.seed,
        "law": args.law,
        "moments": moment_rows,
        "max_moment_gap": max(row["abs_gap"] for row in moment_rows),
        "atom": {
            "analytic": atom_analytic,
            "empirical": sample.near_zero_fraction,
            "abs_gap": abs(atom_analytic - sample.near_zero_fraction),
        },
        "l1_continuous": l1,
    }
    _write_text(f"{args.out_prefix}.json",
                json.dumps(summary, sort_keys=True) + "\n")

    bar_heights = [m / w if w > 0 else 0.0
                   for m, w in zip(emp_masses, widths)]
    curve_x = np.linspace(float(edges[0]) + 1e-9, float(edges[-1]), 240)
    curve_y = [fn(float(x)) for x in curve_x]
    svg = histogram_with_curve(
        list(map(float, edges)), bar_heights, list(map(float, curve_x)),
        curve_y,
        f"shape {p}: simulated spectrum vs analytic density "
        f"(N={args.N}, trials={args.trials})")
    _write_text(f"{args.out_prefix}.svg", svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="shapedspectra",
        description="Spectral theory of shaped random matrices: exact "
                    "moments, bijections, algebraic transforms, densities, "
                    "and Monte Carlo experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    mo = sub.add_parser("moments", help="tree counts and spectral moments")
    _add_shape_flags(mo)
    mo.add_argument("--kmax", type=int, default=8, help="largest k (default 8)")
    mo.add_argument("--method", default="all",
                    choices=["recurrence", "summation", "hypergeometric",
                             "brute", "all"])
    mo.add_argument("--budget", type=int, default=10 ** 8,
                    help="size guard for brute enumeration (default 1e8)")
    mo.add_argument("--out", default="-", help="CSV path (default stdout)")
    mo.set_defaults(fn=_cmd_moments)

    tr = sub.add_parser("transform",
                        help="exact Cauchy/R/S transform coefficients")
    _add_shape_flags(tr)
    tr.add_argument("--what", required=True, choices=["G", "R", "S"])
    tr.add_argument("--order", type=int, default=16,
                    help="truncation order (default 16)")
    tr.add_argument("--out", default="-", help="CSV path (default stdout)")
    tr.set_defaults(fn=_cmd_transform)

    dy = sub.add_parser("dyck", help="tree/path bijection tools")
    dysub = dy.add_subparsers(dest="dyck_command", required=True)
    cv = dysub.add_parser("convert", help="convert between tree and path JSON")
    cv.add_argument("--direction", required=True,
                    choices=["tree2path", "path2tree"])
    cv.add_argument("--in", dest="infile", required=True, help="input JSON")
    cv.add_argument("--out", default="-", help="output JSON (default stdout)")
    cv.set_defaults(fn=_cmd_dyck_convert)
    ct = dysub.add_parser("count", help="count paths of length 2k")
    _add_shape_flags(ct)
    ct.add_argument("--k", type=int, required=True)
    ct.add_argument("--budget", type=int, default=10 ** 8)
    ct.set_defaults(fn=_cmd_dyck_count)

    al = sub.add_parser("algebraic",
                        help="bivariate polynomial annihilating the Cauchy transform")
    al.add_argument("--heights", required=True,
                    help="comma-separated block heights")
    al.add_argument("--out", default="-", help="output path (default stdout)")
    al.set_defaults(fn=_cmd_algebraic)

    de = sub.add_parser("density", help="analytic density on a grid")
    _add_shape_flags(de)
    de.add_argument("--grid", type=int, default=200)
    de.add_argument("--xmin", type=float, default=None)
    de.add_argument("--xmax", type=float, default=None)
    de.add_argument("--eps-ladder", default=None,
                    help="comma-separated eps values for the numeric route")
    de.add_argument("--out", default="-", help="CSV path (default stdout)")
    de.set_defaults(fn=_cmd_density)

    si = sub.add_parser("simulate", help="Monte Carlo spectrum histogram")
    _add_shape_flags(si)
    si.add_argument("-N", type=int, default=30, help="dilation (default 30)")
    si.add_argument("--trials", type=int, default=1000)
    si.add_argument("--seed", type=int, default=42)
    si.add_argument("--bins", type=int, default=200)
    si.add_argument("--law", default="gaussian", choices=["gaussian", "phase"])
    si.add_argument("--kmax", type=int, default=4)
    si.add_argument("--out", default="-", help="histogram CSV path")
    si.add_argument("--emit-moments", default=None,
                    help="also write a k,mean,stderr CSV here")
    si.set_defaults(fn=_cmd_simulate)

    co = sub.add_parser("compare",
                        help="simulate and confront the analytic prediction")
    _add_shape_flags(co)
    co.add_argument("-N", type=int, default=30)
    co.add_argument("--trials", type=int, default=1000)
    co.add_argument("--seed", type=int, default=42)
    co.add_argument("--bins", type=int, default=200)
    co.add_argument("--law", default="gaussian", choices=["gaussian", "phase"])
    co.add_argument("--kmax", type=int, default=4)
    co.add_argument("--out-prefix", default="compare",
                    help="writes PREFIX.csv, PREFIX.svg, PREFIX.json")
    co.set_defaults(fn=_cmd_compare)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, PartitionError, SeriesError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetError, matrix_mc.DimensionCapError, DegreeGuardError) as err:
        print(f"refused: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except NonConvergenceError as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
