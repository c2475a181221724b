"""Command-line front end.

Exit status: 0 on success, 2 on a usage error, 1 when the computation rejects
its input (domain error) or fails.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import acda, chains, experiments, fields
from .output import csv_text, json_text
from .triangles import DomainError, TriangleKind, log_row, triangle_row


def _u64(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a decimal integer, got {text!r}") from None
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2**64)")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {v}")
    return v


def _kind(text: str) -> TriangleKind:
    try:
        return TriangleKind.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _param(text: str):
    from fractions import Fraction
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number or fraction, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pascal-fields",
                                     description="Combinatorial triangles, reversed chains and their limit field lines.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, *, kind=True, seed=False):
        if kind:
            p.add_argument("--kind", type=_kind, required=True, help="pascal | stirling2 | stirling1 | euler")
        if seed:
            p.add_argument("--seed", type=_u64, required=True, help="u64 seed (decimal)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")

    p = sub.add_parser("triangle", help="row n of a triangle")
    common(p)
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--log", action="store_true", help="emit log T(n, k) from log-domain rows")

    p = sub.add_parser("simulate", help="sample forward or reversed paths")
    common(p, seed=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--ell", type=_nonneg_int, help="reversed chain from (m, ell)")
    p.add_argument("--param", type=_param, help="p, N or theta of the forward process")
    p.add_argument("--forward", action="store_true", help="run the forward growth process")
    p.add_argument("--paths", type=_positive_int, default=1)

    p = sub.add_parser("fieldline", help="field line through (1, 1/(1+lambda))")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--grid", type=_positive_int, default=101, help="number of x points on [0, 1]")
    p.add_argument("--ode", action="store_true", help="use the RK4 curve even when a closed form exists")

    p = sub.add_parser("slope", help="p1(m, l) against phi at the realized lambda")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--m", type=_positive_int, nargs="+", required=True)
    p.add_argument("--method", choices=("auto", "exact", "log"), default="auto")

    p = sub.add_parser("converge", help="sup-distance exceedance over m^-eta")
    common(p, seed=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--paths", type=_positive_int, default=200)

    p = sub.add_parser("average", help="mean reversed paths from several starts")
    common(p, seed=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--starts", type=float, nargs="+", required=True, help="start ratios l/m")
    p.add_argument("--paths", type=_positive_int, default=100)

    p = sub.add_parser("acda", help="admissible fraction of surjections [kn+1] -> [n]")
    common(p, kind=False)
    p.add_argument("--letters", "--k", dest="k", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--exact", action="store_true", help="exact rational at any n")
    return parser


# ---------------------------------------------------------------------------
# commands; each returns (header, rows, payload)

def _triangle(a):
    if a.log:
        vals = log_row(a.kind, a.n).log_values
        rows = [(a.n, k, float(v)) for k, v in enumerate(vals)]
        return ("n", "k", "log_T"), rows, {"kind": a.kind, "n": a.n, "log_row": [float(v) for v in vals]}
    row = triangle_row(a.kind, a.n)
    return (("n", "k", "T"), [(a.n, k, v) for k, v in enumerate(row)],
            {"kind": a.kind, "n": a.n, "row": [str(v) for v in row]})


def _simulate(a):
    if a.forward:
        if a.ell is not None:
            raise DomainError("--ell applies to reversed paths; drop it or --forward")
        samples = [chains.simulate_forward(a.kind, a.param, a.m, a.seed, path_index=i) for i in range(a.paths)]
        Xs = [s.X for s in samples]
    else:
        if a.ell is None:
            raise DomainError("reversed paths need --ell (or pass --forward)")
        if a.param is not None:
            raise DomainError("--param applies to --forward only")
        Xs = list(chains.reversed_paths(a.kind, a.m, a.ell, a.paths, a.seed))
    rows = [(i, n, int(x)) for i, X in enumerate(Xs) for n, x in enumerate(X)]
    payload = {"kind": a.kind, "direction": "forward" if a.forward else "reversed", "m": a.m,
               "ell": a.ell, "parameter": a.param, "seed": a.seed,
               "paths": [[int(x) for x in X] for X in Xs]}
    return ("path", "n", "X"), rows, payload


def _fieldline(a):
    line = fields.field_line_ode(a.kind, a.lam) if a.ode else fields.field_line(a.kind, a.lam)
    x = np.arange(a.grid) / (a.grid - 1) if a.grid > 1 else np.array([1.0])
    y = np.asarray(line(x), dtype=float)
    payload = {"kind": a.kind, "lambda": a.lam, "mode": line.mode, "zeta": line.zeta,
               "residual": line.residual, "x": x, "y": y}
    return ("x", "y"), list(zip(x.tolist(), y.tolist())), payload


def _slope(a):
    rep = experiments.slope_convergence(a.kind, a.lam, a.m, method=a.method)
    rows = [(r.m, r.ell, r.lam_realized, r.p1, r.phi, r.error) for r in rep.rows]
    return ("m", "ell", "lambda_realized", "p1", "phi", "error"), rows, rep.to_dict()


def _converge(a):
    rep = experiments.convergence_experiment(a.kind, a.m, a.lam, a.eta, a.paths, a.seed)
    return ("path", "sup_distance", "exceeds"), rep.rows(), rep.to_dict()


def _average(a):
    rep = experiments.averaged_paths(a.kind, a.m, a.starts, a.paths, a.seed)
    return ("t_start", "ell", "j", "t", "mean", "field_line"), list(rep.rows()), rep.to_dict()


def _acda(a):
    rep = acda.acda_report(a.k, a.n, exact=True if a.exact else None)
    row = (rep.k, rep.n, rep.probability, float(rep.probability), rep.c_k, rep.gap)
    return ("k", "n", "probability", "probability_float", "c_k", "gap"), [row], rep.to_dict()


COMMANDS = {"triangle": _triangle, "simulate": _simulate, "fieldline": _fieldline, "slope": _slope,
            "converge": _converge, "average": _average, "acda": _acda}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        header, rows, payload = COMMANDS[args.command](args)
    except (DomainError, ValueError, ArithmeticError) as exc:
        print(f"pascal-fields {args.command}: error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        payload = {"command": args.command, **payload}
        text = json_text(payload)
    else:
        text = csv_text(header, rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    sys.exit(run())
