"""Command-line interface: ``airy2cov <command> [options]``.

Every command writes a table, either CSV (``#`` metadata lines, then a
header row) or JSON (``{"metadata": ..., "rows": [...]}``).  Numbers carry
12 significant digits.  Precondition failures exit with status 1 and a JSON
error record on stderr; ``verify`` exits with 2 when an identity fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__, cache
from .asymptotics import TwoPointApprox, cov_asymptotic, cov_coefficients
from .errors import (
    AccuracyWarning,
    InvalidArgument,
    NoConvergence,
    OutOfDomain,
    SingularMatrix,
    UnknownIdentity,
)
from .fredholm import COV_BOX, COV_ORDER, CovarianceGrid, FredholmConfig, covariance_grid, joint_distribution
from .identities import DEFAULT_SUITE
from .numerics import GridFunction
from .painleve2 import DEFAULT_DOMAIN, DEFAULT_NODES, HMSolution, solve_hastings_mcleod
from .reference import COVARIANCE_TABLE, MOMENTS
from .tw_core import build_profile, moments, verify_all

IDENTITY_TOLERANCE = 1e-6
COMPARE_TIMES = (5.0, 10.0, 15.0, 20.0, 25.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return format(v, ".12g")
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(_fmt(v))
    return v


def render(rows: list[dict], metadata: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "metadata": metadata,
            "rows": [{k: _json_value(v) for k, v in r.items()} for r in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    for key, value in metadata.items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


# --------------------------------------------------------------------------
# shared builders


def _solution(args) -> HMSolution:
    params = {"s_min": args.s_min, "s_max": args.s_max, "nodes": args.nodes, "tol": args.tol}
    if not args.no_cache:
        hit = cache.load("hm", params)
        if hit is not None:
            s = hit["grid"]
            return HMSolution(
                domain=(float(s[0]), float(s[-1])),
                q=GridFunction(s, hit["q"]),
                q_prime=GridFunction(s, hit["q_prime"]),
                tolerance=float(hit["tolerance"]),
                iterations=int(hit["iterations"]),
            )
    sol = solve_hastings_mcleod(args.s_min, args.s_max, args.tol, args.nodes)
    if not args.no_cache:
        cache.store(
            "hm",
            params,
            {
                "grid": sol.grid,
                "q": sol.q.values,
                "q_prime": sol.q_prime.values,
                "tolerance": np.array(sol.tolerance),
                "iterations": np.array(sol.iterations),
            },
        )
    return sol


def _profile(args):
    return build_profile(_solution(args))


def _fredholm_template(args) -> FredholmConfig:
    return FredholmConfig(quad_order=args.quad_order, z_order=args.z_order)


def _cov_grid(args, t: float) -> CovarianceGrid:
    params = {
        "t": float(t),
        "order": args.grid_order,
        "box": list(COV_BOX),
        "quad_order": args.quad_order,
        "z_order": args.z_order,
    }
    if not args.no_cache:
        hit = cache.load("covgrid", params)
        if hit is not None:
            return CovarianceGrid(float(t), hit["nodes"], hit["weights"], hit["excess"])
    grid = covariance_grid(t, _fredholm_template(args), args.grid_order, COV_BOX, args.jobs)
    if not args.no_cache:
        cache.store("covgrid", params, {"nodes": grid.nodes, "weights": grid.weights, "excess": grid.excess})
    return grid


def _positive_times(ts: Sequence[float]) -> list[float]:
    for t in ts:
        if not t > 0:
            raise InvalidArgument(f"t must be positive, got {t}")
    return [float(t) for t in ts]


# --------------------------------------------------------------------------
# commands


def cmd_solve(args):
    sol = _solution(args)
    rows = [{"s": s, "q": q, "q_prime": qp} for s, q, qp in zip(sol.grid, sol.q.values, sol.q_prime.values)]
    return rows, {"residual": _fmt(sol.tolerance), "newton_iterations": sol.iterations}


def cmd_tw(args):
    prof = _profile(args)
    if args.points < 2:
        raise InvalidArgument("--points must be at least 2")
    s = np.linspace(args.from_, args.to, args.points)
    F = prof.cdf(s)
    derivs = [prof.f2(k, s) for k in range(args.k_max + 1)]
    rows = []
    for i, si in enumerate(s):
        row = {"s": si, "F2": F[i], "f2": derivs[0][i]}
        for k in range(1, args.k_max + 1):
            row[f"f2_d{k}"] = derivs[k][i]
        rows.append(row)
    return rows, {}


def cmd_moments(args):
    m = moments(_profile(args), 4, args.quad)
    rows = [{"n": n, "mu": m.mu[n], "reference": MOMENTS[n], "difference": m.mu[n] - MOMENTS[n]} for n in range(5)]
    return rows, {"variance": _fmt(m.variance)}


def cmd_coeffs(args):
    c = cov_coefficients(moments(_profile(args)))
    rows = [{"name": f"C{n}", "n": n, "value": c.C[n]} for n in range(1, 11)]
    return rows, {}


def cmd_cov(args):
    ts = _positive_times(args.t)
    rows = []
    if args.method == "asymptotic":
        c = cov_coefficients(moments(_profile(args)))
        for t in ts:
            rows.append({"t": t, "method": "asymptotic", "order": args.order, "cov": cov_asymptotic(c, t, args.order)})
    else:
        for t in ts:
            rows.append({"t": t, "method": "fredholm", "order": "", "cov": _cov_grid(args, t).value})
    return rows, {}


def cmd_joint(args):
    ts = _positive_times(args.t) if args.method == "asymptotic" else [float(t) for t in args.t]
    rows = []
    if args.method == "asymptotic":
        approx = TwoPointApprox(_profile(args), args.order)
        for t in ts:
            raw = approx.raw(t, args.s1, args.s2)
            rows.append({"t": t, "s1": args.s1, "s2": args.s2, "method": "asymptotic", "value": min(1.0, max(0.0, raw)), "raw": raw})
    else:
        for t in ts:
            cfg = FredholmConfig(t=t, s1=args.s1, s2=args.s2, quad_order=args.quad_order, z_order=args.z_order)
            v = joint_distribution(cfg)
            rows.append({"t": t, "s1": args.s1, "s2": args.s2, "method": "fredholm", "value": v, "raw": v})
    return rows, {}


def cmd_verify(args):
    res = verify_all(_profile(args), DEFAULT_SUITE)
    rows = [
        {"identity": name, "residual": r, "tolerance": IDENTITY_TOLERANCE, "pass": bool(r <= IDENTITY_TOLERANCE)}
        for name, r in res.items()
    ]
    failed = [r["identity"] for r in rows if not r["pass"]]
    return rows, {"window": [-6.0, 4.0], "failed": failed}


def cmd_compare(args):
    ts = _positive_times(args.t)
    c = cov_coefficients(moments(_profile(args)))
    rows = []
    for t in ts:
        exact = _cov_grid(args, t).value
        row = {"t": t, "cov_fredholm": exact}
        for n in (6, 8, 10):
            approx = cov_asymptotic(c, t, n)
            row[f"cov_2_{n}"] = approx
            row[f"error_{n}"] = exact - approx
        row["cov_fredholm_display"] = f"{exact:.11f}"
        for n in (6, 8, 10):
            row[f"cov_2_{n}_display"] = f"{row[f'cov_2_{n}']:.11f}"
            row[f"error_{n}_display"] = f"{row[f'error_{n}']:.0e}"
        ref = COVARIANCE_TABLE.get(int(t)) if float(t).is_integer() else None
        row["cov_reference"] = ref[0] if ref else ""
        rows.append(row)
    return rows, {}


COMMANDS = {
    "solve": (cmd_solve, "Hastings-McLeod q and q' on the collocation grid"),
    "tw": (cmd_tw, "F2 and the density derivatives f2^(k) on a uniform grid"),
    "moments": (cmd_moments, "moments mu_0..mu_4 of F2"),
    "coeffs": (cmd_coeffs, "covariance coefficients C_1..C_10"),
    "cov": (cmd_cov, "covariance at given times"),
    "joint": (cmd_joint, "two-point distribution P(A(0) <= s1, A(t) <= s2)"),
    "verify": (cmd_verify, "run the u_{j,k} identity suite (exit 2 on failure)"),
    "compare": (cmd_compare, "Fredholm covariance against truncated series, orders 6, 8, 10"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("output and caching")
    g.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: csv)")
    g.add_argument("--output", "-o", default="-", help="output file, '-' for stdout (default: -)")
    g.add_argument("--no-cache", action="store_true", help=f"ignore and do not write the disk cache (${cache.ENV_VAR})")
    g.add_argument("--jobs", type=int, default=1, help="worker threads for determinant sweeps (default: 1)")
    p = common.add_argument_group("Painleve II solve")
    p.add_argument("--s-min", type=float, default=DEFAULT_DOMAIN[0], help="left end of the domain (default: -10)")
    p.add_argument("--s-max", type=float, default=DEFAULT_DOMAIN[1], help="right end of the domain (default: 10)")
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="collocation intervals (default: 160)")
    p.add_argument("--tol", type=float, default=1e-10, help="collocation residual bound (default: 1e-10)")
    f = common.add_argument_group("Fredholm determinants")
    f.add_argument("--quad-order", type=int, default=60, help="nodes per interval (default: 60)")
    f.add_argument("--z-order", type=int, default=60, help="nodes for the z-integrals (default: 60)")
    f.add_argument("--grid-order", type=int, default=COV_ORDER, help="covariance grid per axis on [-10, 6] (default: 80)")

    parser = _Parser(prog="airy2cov", description="Airy2 two-point asymptotics checked against Fredholm determinants.")
    parser.add_argument("--version", action="version", version=f"airy2cov {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True
    subs = {}
    for name, (_, help_text) in COMMANDS.items():
        subs[name] = sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    subs["tw"].add_argument("--from", dest="from_", type=float, default=-8.0, help="first s (default: -8)")
    subs["tw"].add_argument("--to", type=float, default=4.0, help="last s (default: 4)")
    subs["tw"].add_argument("--points", type=int, default=121, help="number of s values (default: 121)")
    subs["tw"].add_argument("--k-max", type=int, choices=range(0, 9), default=8, metavar="K", help="highest derivative order, 0..8 (default: 8)")
    subs["moments"].add_argument("--quad", type=int, default=256, help="Gauss-Legendre order (default: 256)")
    subs["cov"].add_argument("--method", choices=("asymptotic", "fredholm"), default="asymptotic", help="(default: asymptotic)")
    subs["cov"].add_argument("--order", type=int, choices=(2, 4, 6, 8, 10), default=10, help="series order N (default: 10)")
    subs["cov"].add_argument("--t", type=float, nargs="+", required=True, help="one or more times")
    subs["joint"].add_argument("--method", choices=("asymptotic", "fredholm"), default="fredholm", help="(default: fredholm)")
    subs["joint"].add_argument("--order", type=int, choices=(0, 2, 4, 6, 8), default=8, help="series order (default: 8)")
    subs["joint"].add_argument("--t", type=float, nargs="+", required=True, help="one or more times")
    subs["joint"].add_argument("--s1", type=float, required=True, help="threshold at time 0")
    subs["joint"].add_argument("--s2", type=float, required=True, help="threshold at time t")
    subs["compare"].add_argument("--t", type=float, nargs="+", default=list(COMPARE_TIMES), help="times (default: 5 10 15 20 25)")
    return parser


def _metadata(args, extra: dict) -> dict:
    skip = {"output", "format", "no_cache", "jobs", "command"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {"program": f"airy2cov {__version__}", "command": args.command, "parameters": params, **extra}


def _error(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return 1


def main(argv: Sequence[str] | None = None) -> int:
    import warnings

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _error("usage", str(exc))
    if args.jobs < 1:
        return _error("usage", "--jobs must be at least 1")
    handler = COMMANDS[args.command][0]
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", AccuracyWarning)
            rows, extra = handler(args)
    except (InvalidArgument, OutOfDomain, NoConvergence, SingularMatrix, UnknownIdentity) as exc:
        return _error(type(exc).__name__, str(exc))
    notes = sorted({str(w.message) for w in caught if issubclass(w.category, AccuracyWarning)})
    if notes:
        extra = {**extra, "warnings": notes}
    text = render(rows, _metadata(args, extra), args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            return _error("io", str(exc))
    if args.command == "verify" and extra.get("failed"):
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
