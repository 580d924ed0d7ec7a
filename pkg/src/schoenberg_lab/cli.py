"""``schoenberg-lab`` command-line interface.

Every subcommand writes one table (CSV or JSON) to stdout or ``--out``.
CSV output starts with ``#`` comment lines echoing the configuration and
ends with ``#`` summary lines; floats are written with 17 significant digits.

Exit codes: 0 success, 1 numerical failure (or a failed bound), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from .bounds import GridConfig, HypothesisError, corollary_delta, equivalence_report
from .bspline import basis_condition_upper, basis_matrix
from .eigen import ConvergenceError
from .functions import parse_function, resolve
from .knots import (
    KnotVector,
    bernstein_knot_vector,
    geometric_knot_vector,
    greville_nodes,
    make_knot_vector,
    mesh_stats,
    random_knot_vector,
    uniform_knot_vector,
)
from .schoenberg import collocation_matrix, iterate_distances
from .smoothness import modulus
from .spectral import (
    decay_rate_estimate,
    gershgorin_discs,
    spectrum,
    verify_fixed_vectors,
)

PROG = "schoenberg-lab"
FAMILIES = ("uniform", "bernstein", "geometric", "random")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------


def int_range(text: str) -> tuple[int, int]:
    """``"3"`` -> (3, 3); ``"2..20"`` -> (2, 20)."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected INT or INT..INT, got {text!r}") from None
    if b < a:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("knots")
    g.add_argument("--n", type=int_range, default=(4, 4), help="mesh intervals, INT or INT..INT")
    g.add_argument("--interior", type=float_list, help="explicit interior knots, comma separated")
    g.add_argument("--family", choices=FAMILIES, default="uniform")
    g.add_argument("--q", type=float, default=0.5, help="ratio for the geometric family")
    g.add_argument("--k", type=int_range, default=(3, 3), help="degree, INT or INT..INT")
    e = common.add_argument_group("experiment")
    e.add_argument("--f", action="append", dest="functions", metavar="NAME",
                   help="registry function, optionally NAME:p1,p2 (repeatable)")
    e.add_argument("--r", type=int, default=2, help="modulus order")
    e.add_argument("--t", type=float, help="modulus step bound")
    e.add_argument("--grid", type=int, default=10_001)
    e.add_argument("--h-steps", type=int, default=64)
    e.add_argument("--x-steps", type=int, default=4096)
    e.add_argument("--m", type=int_range, default=(1, 30), help="iterate range INT..INT")
    e.add_argument("--tol-one", type=float, default=1e-8)
    e.add_argument("--seed", type=int, default=0)
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("basis", "basis values and partition-of-unity residual on a grid"),
        ("spectrum", "eigenvalues of the collocation matrix, gap, Gershgorin check"),
        ("iterates", "distance of S^m f to the endpoint interpolant, decay fit"),
        ("modulus", "modulus of smoothness of registry functions"),
        ("bounds", "verify the two-sided error bounds"),
        ("sweep", "spectral gap over ranges of n or k"),
    ]:
        sub.add_parser(name, parents=[common], help=help_)
    return parser


# -- helpers ------------------------------------------------------------------


def _single(rng: tuple[int, int], flag: str) -> int:
    if rng[0] != rng[1]:
        raise UsageError(f"{flag} takes a single value for this subcommand")
    return rng[0]


def make_kv(family: str, n: int, k: int, q: float = 0.5, seed: int = 0,
            interior: Sequence[float] | None = None) -> KnotVector:
    if interior is not None:
        return make_knot_vector(interior, k)
    if family == "bernstein":
        return bernstein_knot_vector(k)
    if family == "geometric":
        return geometric_knot_vector(n, k, q)
    if family == "random":
        return random_knot_vector(n, k, seed)
    return uniform_knot_vector(n, k)


def _kv_from_args(args) -> KnotVector:
    k = _single(args.k, "--k")
    n = _single(args.n, "--n")
    return make_kv(args.family, n, k, args.q, args.seed, args.interior)


def _function_names(args, default: str) -> list[str]:
    names = args.functions or [default]
    for name in names:
        parse_function(name)
    return names


def _fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if v is None:
        return ""
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {key: _jsonable(val) for key, val in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        return float(v) if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def _meta(args) -> dict:
    config = {key: val for key, val in sorted(vars(args).items()) if key not in ("out", "format")}
    return {"program": PROG, "version": __version__, "command": args.command,
            "config": _jsonable(config)}


def render(args, columns: Sequence[str], rows: Iterable[Sequence[Any]],
           summary: dict | None = None) -> str:
    rows = [list(r) for r in rows]
    meta = _meta(args)
    if args.format == "json":
        doc = {"meta": meta, "columns": list(columns),
               "rows": [dict(zip(columns, r)) for r in rows]}
        if summary is not None:
            doc["summary"] = summary
        return json.dumps(_jsonable(doc), indent=2) + "\n"

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    buf.write(f"# {PROG} {__version__}\r\n")
    buf.write(f"# command: {args.command}\r\n")
    cfg = "; ".join(f"{key}={_fmt(val)}" for key, val in meta["config"].items())
    buf.write(f"# config: {cfg}\r\n")
    buf.write(f"# grid: {args.grid}; h_steps: {args.h_steps}; x_steps: {args.x_steps}\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    for key, val in (summary or {}).items():
        buf.write(f"# {key}: {_fmt(val)}\r\n")
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------


def cmd_basis(args) -> tuple[str, int]:
    if args.functions:
        _function_names(args, "square")
    kv = _kv_from_args(args)
    x = np.linspace(0.0, 1.0, args.grid)
    B = basis_matrix(kv, x)
    resid = np.abs(B.sum(axis=1) - 1.0)
    columns = ["x", *(f"N[{j}]" for j in range(-kv.degree, kv.n)), "residual"]
    rows = (
        [float(xv), *(float(b) for b in brow), float(rv)]
        for xv, brow, rv in zip(x, B, resid)
    )
    summary = {"n": kv.n, "k": kv.degree, "max_residual": float(resid.max())}
    return render(args, columns, rows, summary), EXIT_OK


def cmd_spectrum(args) -> tuple[str, int]:
    kv = _kv_from_args(args)
    sp = spectrum(kv, args.tol_one)
    N = collocation_matrix(kv)
    discs = gershgorin_discs(N)
    fixed = verify_fixed_vectors(N, greville_nodes(kv))
    gersh_ok = discs.contains_all(sp.eigenvalues, 1e-9)
    columns = ["index", "re", "im", "modulus", "near_one"]
    rows = [
        [i, float(lam.real), float(lam.imag), float(abs(lam)), bool(abs(lam - 1) <= sp.tol_one)]
        for i, lam in enumerate(sp.eigenvalues)
    ]
    arg = sp.gamma_eigenvalue
    summary = {
        "n": kv.n,
        "k": kv.degree,
        "gamma": sp.gamma,
        "gamma_eigenvalue_re": None if arg is None else arg.real,
        "gamma_eigenvalue_im": None if arg is None else arg.imag,
        "one_multiplicity": sp.one_multiplicity,
        "tol_one": sp.tol_one,
        "gershgorin": "pass" if gersh_ok else "fail",
        "constant_residual": fixed.constant_residual,
        "linear_residual": fixed.linear_residual,
        "flags": " | ".join(sp.flags),
    }
    return render(args, columns, rows, summary), EXIT_OK if gersh_ok else EXIT_NUMERIC


def cmd_iterates(args) -> tuple[str, int]:
    kv = _kv_from_args(args)
    names = _function_names(args, "square")
    if len(names) > 1:
        raise UsageError("iterates takes a single --f")
    name = names[0]
    f = resolve(name, kv)
    m_lo, m_hi = args.m
    if m_lo < 1:
        raise UsageError("--m must start at 1 or later")
    d = iterate_distances(kv, f, m_hi, args.grid)[m_lo - 1 :]
    rows = [
        [m, float(dm), float(np.log(dm)) if dm > 0 else None]
        for m, dm in zip(range(m_lo, m_hi + 1), d)
    ]
    sp = spectrum(kv, args.tol_one)
    summary: dict[str, Any] = {"function": name, "n": kv.n, "k": kv.degree, "gamma": sp.gamma}
    try:
        fit = decay_rate_estimate(kv, f, m_lo, m_hi, args.grid)
    except ValueError as exc:
        summary.update(rho=None, r_squared=None, intercept=None, ratio=None, fit_note=str(exc))
    else:
        summary.update(
            rho=fit.rho,
            r_squared=fit.r_squared,
            intercept=fit.intercept,
            ratio=fit.rho / sp.gamma if sp.gamma > 0 else None,
            fit_note="intercept is an empirical proxy for the decay constant",
        )
    if sp.flags:
        summary["flags"] = " | ".join(sp.flags)
    return render(args, ["m", "distance", "log_distance"], rows, summary), EXIT_OK


def cmd_modulus(args) -> tuple[str, int]:
    kv = _kv_from_args(args)
    t = args.t if args.t is not None else 1.0 / args.r
    rows = []
    for name in _function_names(args, "square"):
        est = modulus(resolve(name, kv), args.r, t, args.h_steps, args.x_steps)
        rows.append([name, est.r, est.t, est.value, est.h_grid_size, est.x_grid_size])
    columns = ["function", "r", "t", "value", "h_steps", "x_steps"]
    return render(args, columns, rows), EXIT_OK


BOUNDS_COLUMNS = (
    "function", "n", "k", "delta_min", "delta_max", "gamma", "tol_one", "dk_used",
    "dk_empirical", "r", "t", "approx_error", "omega_r_t", "lower_constant",
    "lower_constant_empirical", "corollary_delta", "corollary_constant", "omega_r_delta",
    "beutel_t", "beutel_clamped", "omega_2_beutel",
)
VERDICT_NAMES = ("lower_corollary", "upper_beutel", "lower_at_t")


def cmd_bounds(args) -> tuple[str, int]:
    kv = _kv_from_args(args)
    names = _function_names(args, "square")
    cfg = GridConfig(args.grid, args.h_steps, args.x_steps)
    reports = []
    for name in names:
        reports.append(equivalence_report(
            kv, resolve(name, kv), args.r, args.t, cfg, args.tol_one, name=name, seed=args.seed,
        ))
    ok = all(rep.passed for rep in reports)
    if args.format == "json":
        doc = {"meta": _meta(args), "reports": [rep.to_dict() for rep in reports],
               "all_pass": ok}
        return json.dumps(_jsonable(doc), indent=2) + "\n", EXIT_OK if ok else EXIT_NUMERIC
    columns = list(BOUNDS_COLUMNS)
    for v in VERDICT_NAMES:
        columns += [f"{v}_status", f"{v}_lhs", f"{v}_rhs", f"{v}_margin"]
    rows = []
    for rep in reports:
        d = rep.to_dict()
        row = [d[c] for c in BOUNDS_COLUMNS]
        by_name = {v.name: v for v in rep.verdicts}
        for v in VERDICT_NAMES:
            vd = by_name[v]
            row += [vd.status, vd.lhs, vd.rhs, vd.margin]
        rows.append(row)
    return render(args, columns, rows, {"all_pass": ok}), EXIT_OK if ok else EXIT_NUMERIC


SWEEP_COLUMNS = ("family", "n", "k", "gamma", "one_multiplicity", "delta_min",
                 "corollary_delta", "error")


def sweep_cell(family: str, n: int, k: int, r: int, q: float, seed: int,
               tol_one: float) -> list[Any]:
    n_eff = 1 if family == "bernstein" else n
    try:
        kv = make_kv(family, n_eff, k, q, seed)
        sp = spectrum(kv, tol_one)
        dmin = mesh_stats(kv).delta_min
        cd = None
        if k > r and sp.gamma < 1.0 and not sp.is_projector:
            cd = corollary_delta(kv, r, sp.gamma, basis_condition_upper(k))
        return [family, n_eff, k, sp.gamma, sp.one_multiplicity, dmin, cd, ""]
    except (ConvergenceError, ValueError) as exc:
        return [family, n_eff, k, None, None, None, None, str(exc)]


def cmd_sweep(args) -> tuple[str, int]:
    if args.interior is not None:
        raise UsageError("sweep takes a knot family, not --interior")
    ns = [1] if args.family == "bernstein" else list(range(args.n[0], args.n[1] + 1))
    ks = list(range(args.k[0], args.k[1] + 1))
    rows = [sweep_cell(args.family, n, k, args.r, args.q, args.seed, args.tol_one)
            for n in ns for k in ks]
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    failed = sum(1 for row in rows if row[-1])
    return render(args, SWEEP_COLUMNS, rows, {"cells": len(rows), "failed_cells": failed}), EXIT_OK


COMMANDS = {
    "basis": cmd_basis,
    "spectrum": cmd_spectrum,
    "iterates": cmd_iterates,
    "modulus": cmd_modulus,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, code = COMMANDS[args.command](args)
    except (UsageError, HypothesisError, KeyError, IndexError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"{PROG}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"{PROG}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
