"""Command-line front end: ``latsamp <subcommand> [flags]``.

Every output starts with a header recording the tool version, the seed and
the full flag set.  JSON output is one object with a ``meta`` member; CSV
output carries the header as ``#``-prefixed comment lines followed by a
column row and data rows.  Points are written as coordinates divided by
2 pi.

Exit codes: 0 success, 1 a verification did not hold, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .discretize import (
    ShiftOperator,
    convolution_exactness_set,
    discretized_convolution,
    op_norm,
    rectangle_collection,
    universal_check,
)
from .freqsets import build_rectangle
from .kernels import KernelId, build_kernel
from .lattices import (
    PointSet,
    fibonacci_points,
    gamma_scan,
    is_exact_on,
    korobov_points,
    korobov_search,
    min_product,
)
from .trigpoly import RNG_ALGORITHM, convolve, lp_norm, norm_method, random_poly
from .verify import ConfigError, SuiteConfig, oracle_grid_norm, run_suite

__all__ = ["main", "build_parser", "read_points"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

KERNEL_KINDS = ("dirichlet", "fejer", "vallee_poussin", "block_A", "hc_vallee_poussin", "delta_hc_vp")


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return "inf" if math.isinf(v) else v
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


# scan tables default to CSV
CSV_DEFAULT = ("gen-points", "gamma-scan", "op-norm-scan")


def _meta(args: argparse.Namespace) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("func", "seed_given")}
    return {"tool": "latsamp", "version": __version__, "command": args.command,
            "seed": args.seed, "rng": RNG_ALGORITHM, "flags": _jsonable(flags)}


def _emit(args, columns: Sequence[str], rows: Sequence[Sequence], extra: dict | None = None) -> None:
    """Write a table (and, for JSON, any extra top-level members)."""
    meta = _meta(args)
    if args.format == "json":
        obj = {"meta": meta, **_jsonable(extra or {}),
               "columns": list(columns), "rows": _jsonable([list(r) for r in rows])}
        text = json.dumps(obj, indent=2) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# latsamp {__version__} {args.command}\n")
        buf.write(f"# seed={args.seed} rng={RNG_ALGORITHM}\n")
        buf.write(f"# flags={json.dumps(meta['flags'], sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_csv_cell(v) for v in r])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return "inf" if math.isinf(v) else repr(float(v))
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return v


# ------------------------------------------------------------------ points

def read_points(path) -> PointSet:
    """Load a point set written by ``gen-points`` (CSV or JSON, unit coordinates)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        u = np.asarray(obj["rows"], dtype=float)
        prov = obj.get("generator", {})
    else:
        lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
        reader = csv.reader(lines[1:])
        u = np.asarray([[float(c) for c in row] for row in reader], dtype=float)
        prov = {"source": str(path)}
    if u.ndim != 2 or u.shape[0] == 0:
        raise UsageError(f"no points found in {path}")
    return PointSet.from_unit_coordinates(u, provenance=prov)


def _parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _parse_p(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid exponent {text!r}") from None
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"exponent must be >= 1, got {text!r}")
    return p


def _points_from_args(args) -> PointSet:
    chosen = [args.points is not None, args.fibonacci is not None, args.korobov is not None]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --points, --fibonacci, --korobov")
    if args.points is not None:
        return read_points(args.points)
    if args.fibonacci is not None:
        return fibonacci_points(args.fibonacci)
    if args.h is None:
        raise UsageError("--korobov needs --h")
    if len(args.h) == 1 and args.d is None:
        raise UsageError("a scalar --h needs --d")
    return korobov_points(args.korobov, args.h, args.d)


def _add_point_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("point set")
    g.add_argument("--points", help="point file written by gen-points")
    g.add_argument("--fibonacci", type=int, metavar="N", help="Fibonacci lattice with m = b_N")
    g.add_argument("--korobov", type=int, metavar="M", help="Korobov lattice modulus")
    g.add_argument("--h", type=_parse_ints, help="generating vector, or a scalar h with --d")
    g.add_argument("--d", type=int, help="dimension for a scalar Korobov --h")


# ------------------------------------------------------------- subcommands

def cmd_gen_points(args) -> int:
    pts = _points_from_args(args)
    u = pts.unit_coordinates()
    cols = [f"u{i + 1}" for i in range(pts.dim)]
    extra = {"generator": pts.provenance, "m": len(pts)}
    _emit(args, cols, u.tolist(), extra)
    return EXIT_OK


def cmd_dump_kernel(args) -> int:
    kid = KernelId(args.kind, tuple(args.params), args.d)
    K = build_kernel(kid)
    cols = [f"k{i + 1}" for i in range(K.dim)] + ["re", "im"]
    rows = [list(map(int, k)) + [float(c.real), float(c.imag)] for k, c in zip(K.freqs, K.coeffs)]
    _emit(args, cols, rows, {"kernel": kid.label(), "terms": len(K)})
    return EXIT_OK


def cmd_gamma_scan(args) -> int:
    rows = gamma_scan(args.n_min, args.n_max)
    _emit(args, ["n", "b_n", "N_max", "ratio"], [[r["n"], r["b_n"], r["N_max"], r["ratio"]] for r in rows])
    return EXIT_OK


def cmd_korobov_search(args) -> int:
    res = korobov_search(args.L, args.d)
    out = {"L": res["L"], "d": res["d"], "cardGamma": res["card_gamma"], "m": res["m"],
           "h": res["h"], "generating_vector": list(res["generator"].h), "verified": res["verified"]}
    if args.format == "json":
        text = json.dumps({"meta": _meta(args), **_jsonable(out)}, indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, list(out), [list(out.values())])
    return EXIT_OK if res["verified"] else EXIT_FAIL


def cmd_verify_convolution(args) -> int:
    pts = _points_from_args(args)
    j = tuple(args.j)
    if len(j) != pts.dim:
        raise UsageError(f"--j has {len(j)} entries for a {pts.dim}-dimensional point set")
    R = build_rectangle(j)
    rng = np.random.default_rng(args.seed)
    rows, worst_exact = [], 0.0
    for t in range(args.pairs):
        s1, s2 = (int(v) for v in rng.integers(0, 2**31, size=2))
        f, g = random_poly(R, s1), random_poly(R, s2)
        err = discretized_convolution(f, g, pts).max_abs_diff(convolve(f, g))
        exact = is_exact_on(pts, convolution_exactness_set(f, g))
        if exact:
            worst_exact = max(worst_exact, err)
        rows.append([t, exact, err])
    ok = worst_exact <= args.tol
    _emit(args, ["pair", "exact_regime", "max_coefficient_error"], rows,
          {"passed": ok, "max_error_in_regime": worst_exact, "tol": args.tol})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_norms(args) -> int:
    kid = KernelId(args.kind, tuple(args.params), args.d)
    K = build_kernel(kid)
    rows, ok = [], True
    for p in args.p:
        value = lp_norm(K, p, oversample=args.oversample)
        est = oracle_grid_norm(K, p, levels=args.levels)
        diff = abs(est[-1] - value)
        agree = diff <= args.tol * max(1.0, abs(value))
        ok &= agree
        rows.append([p, value, norm_method(K, p), est[-1], diff, agree])
    _emit(args, ["p", "lp_norm", "method", "oracle_finest", "difference", "agree"], rows,
          {"kernel": kid.label(), "passed": ok, "tol": args.tol})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_op_norm_scan(args) -> int:
    pts = _points_from_args(args)
    if args.family not in ("hc_vallee_poussin", "delta_hc_vp"):
        raise UsageError("op-norm-scan family must be hc_vallee_poussin or delta_hc_vp")
    rows = []
    for r in range(args.r_min, args.r_max + 1):
        K = build_kernel(KernelId(args.family, (r,), pts.dim))
        op = ShiftOperator(K, pts)
        for p in args.p:
            value, info = op_norm(op, p, oversample=args.oversample, details=True)
            rows.append([r, p, value, info["method"]])
    _emit(args, ["r", "p", "op_norm", "method"], rows, {"family": args.family, "m": len(pts)})
    return EXIT_OK


def cmd_universal_check(args) -> int:
    pts = _points_from_args(args)
    N = args.N if args.N is not None else (min_product(pts.dual()) - 1) // 9
    if N < 1:
        raise UsageError("collection is empty: N < 1")
    collection = rectangle_collection(N, pts.dim)
    rows, ok = [], True
    for p in args.p:
        rep = universal_check(collection, pts, p, trials=args.trials, seed=args.seed,
                              oversample=args.oversample)
        good = rep["all_exact"] and rep["max_representation_error"] <= args.tol
        if p == 2:
            good &= abs(rep["lower"] - 1) <= args.tol and abs(rep["upper"] - 1) <= args.tol
        ok &= good
        rows.append([p, rep["rectangles"], rep["lower"], rep["upper"], rep["max_spr_ratio"],
                     rep["max_op_norm_inf"], rep["max_representation_error"], rep["all_exact"]])
    _emit(args, ["p", "rectangles", "lower", "upper", "max_spr_ratio", "max_op_norm_inf",
                 "max_representation_error", "all_exact"], rows,
          {"N": N, "m": len(pts), "passed": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_run_suite(args) -> int:
    try:
        cfg = SuiteConfig.from_file(args.config) if args.config else SuiteConfig()
    except (ConfigError, TypeError, ValueError, OSError) as exc:
        raise UsageError(f"invalid config: {exc}") from None
    if args.seed_given:
        cfg.seed = args.seed
    if args.criteria:
        cfg.criteria = tuple(args.criteria)
    report, code = run_suite(cfg)
    report = {"meta": _meta(args), **report}
    if args.format == "csv":
        rows = [[c["id"], c["name"], c["passed"], c["timing"]["seconds"], "; ".join(c["failures"])]
                for c in report.get("criteria", [])]
        _emit(args, ["id", "name", "passed", "seconds", "failures"], rows)
    else:
        text = json.dumps(_jsonable(report), indent=2) + "\n"
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    if code == 2:
        print(f"latsamp: {report.get('error')}", file=sys.stderr)
    return code


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default 0)")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default: csv for scan tables, json otherwise)")

    parser = _Parser(prog="latsamp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"latsamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen-points", parents=[common], help="write a lattice point set")
    _add_point_flags(p)
    p.set_defaults(func=cmd_gen_points)

    p = sub.add_parser("dump-kernel", parents=[common], help="list kernel coefficients")
    p.add_argument("--kind", choices=KERNEL_KINDS, required=True)
    p.add_argument("--params", type=_parse_ints, required=True,
                   help="one parameter per coordinate, or r for hyperbolic-cross kernels")
    p.add_argument("--d", type=int, help="dimension of hyperbolic-cross kernels")
    p.set_defaults(func=cmd_dump_kernel)

    p = sub.add_parser("gamma-scan", parents=[common], help="largest exact hyperbolic cross per Fibonacci n")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=25)
    p.set_defaults(func=cmd_gamma_scan)

    p = sub.add_parser("korobov-search", parents=[common], help="find a Korobov lattice exact on Gamma(L, d)")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_korobov_search)

    p = sub.add_parser("verify-convolution", parents=[common],
                       help="discretized against exact convolution on a rectangle")
    _add_point_flags(p)
    p.add_argument("--j", type=_parse_ints, required=True, help="rectangle R(j)")
    p.add_argument("--pairs", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_verify_convolution)

    p = sub.add_parser("verify-norms", parents=[common], help="kernel L_p norms against the grid oracle")
    p.add_argument("--kind", choices=KERNEL_KINDS, required=True)
    p.add_argument("--params", type=_parse_ints, required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=_parse_p, nargs="+", default=[1.0, 2.0, math.inf])
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--oversample", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_verify_norms)

    p = sub.add_parser("op-norm-scan", parents=[common], help="shift-operator norms over r")
    _add_point_flags(p)
    p.add_argument("--family", default="hc_vallee_poussin")
    p.add_argument("--r-min", type=int, default=2)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--p", type=_parse_p, nargs="+", default=[1.0, 2.0, math.inf])
    p.add_argument("--oversample", type=int, default=8)
    p.set_defaults(func=cmd_op_norm_scan)

    p = sub.add_parser("universal-check", parents=[common],
                       help="two-sided discretization over all rectangles with prod j <= N")
    _add_point_flags(p)
    p.add_argument("--N", type=int, help="collection bound (default: N_max // 9)")
    p.add_argument("--p", type=_parse_p, nargs="+", default=[2.0, 4.0, math.inf])
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--oversample", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_universal_check)

    p = sub.add_parser("run-suite", parents=[common], help="run the acceptance suite")
    p.add_argument("--config", help="JSON configuration file")
    p.add_argument("--criteria", type=int, nargs="+", help="subset of criterion ids")
    p.set_defaults(func=cmd_run_suite)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version and usage errors
        return int(exc.code or 0)
    args.seed_given = args.seed is not None
    if args.seed is None:
        args.seed = 0
    if args.format is None:
        args.format = "csv" if args.command in CSV_DEFAULT else "json"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"latsamp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OverflowError) as exc:
        print(f"latsamp {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
