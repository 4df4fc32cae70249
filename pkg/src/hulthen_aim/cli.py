"""Command-line interface: ``hulthen-aim <command> ...``.

Exit codes: 0 success, 1 computation failure (or unbound with --strict),
2 usage error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
import warnings

import numpy as np

from . import aim
from .hulthen import (
    HulthenParams,
    centrifugal,
    energy_aim,
    energy_closed,
    spectroscopic,
    v_effective,
    wavefunction_u,
)
from .jet import PoleError, jet_polynomial
from .numerov import DEFAULT_POINTS, DEFAULT_TOL, solve_state
from .refdata import COLUMNS, load_table

METHODS = ("closed", "aim", "numerov-true", "numerov-approx")
FIGURE_DELTAS = tuple(round(0.4 * i, 10) for i in range(1, 14))


class CliError(Exception):
    """Computation-level failure reported with exit code 1."""


# -- output -------------------------------------------------------------


def _text_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.7f}"
    return str(v)


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def emit(records: list[dict], columns: list[str], fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        data = [{c: _json_value(r.get(c)) for c in columns} for r in records]
        json.dump(data, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([_csv_cell(r.get(c)) for c in columns])
    else:
        cells = [[_text_cell(r.get(c)) for c in columns] for r in records]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        out.write("  ".join(c.rjust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip() + "\n")


# -- commands -----------------------------------------------------------


def _params(args, delta: float) -> HulthenParams:
    return HulthenParams(delta=delta, Z=args.z, M=args.mass, hbar=args.hbar)


def cmd_eigenvalue(args) -> int:
    state = args.state
    p = _params(args, args.delta)
    if args.method == "closed":
        res = energy_closed(state, p)
    elif args.method == "aim":
        res = energy_aim(state, p, z0=args.z0)
    else:
        res = solve_state(state, p, approx=args.method == "numerov-approx",
                          points=args.grid_points, tol=args.tol)
    rec = {"state": state.label, "n": state.n, "l": state.l, "delta": p.delta}
    rec.update(res.as_dict())
    cols = ["state", "n", "l", "delta", "method", "energy", "binding", "bound"]
    emit([rec], cols, args.format)
    if not res.bound:
        print(f"state {state.label} is not bound at delta={p.delta}", file=sys.stderr)
        return 1 if args.strict else 0
    return 0


def cmd_table(args) -> int:
    selected = args.columns
    records = []
    for row in load_table(args.table):
        state = spectroscopic(row.state_label)
        p = _params(args, row.delta)
        closed = energy_closed(state, p)
        num = solve_state(state, p, points=args.grid_points, tol=args.tol)
        rec = {
            "state": row.state_label,
            "delta": row.delta,
            "closed": closed.binding if closed.bound else None,
            "numerov_true": num.binding if num.bound else None,
        }
        for c in selected:
            rec[c] = getattr(row, c)
        rec["closed_dev"] = (
            abs(rec["closed"] - row.aim) if rec["closed"] is not None and row.aim is not None else None
        )
        rec["numerov_dev"] = (
            abs(rec["numerov_true"] - row.numerical)
            if rec["numerov_true"] is not None and row.numerical is not None
            else None
        )
        rec["suspect"] = row.suspect
        records.append(rec)
    cols = ["state", "delta", "closed", "numerov_true", *selected, "closed_dev", "numerov_dev", "suspect"]
    emit(records, cols, args.format)
    return 0


def potential_curve_records(deltas, l: int, dr_min: float, dr_max: float, samples: int,
                            z: float = 1.0, mass: float = 1.0, hbar: float = 1.0) -> list[dict]:
    """(delta r, V_eff, approximate V_eff) samples for each screening value."""
    x = np.linspace(dr_min, dr_max, samples)
    records = []
    for d in deltas:
        p = HulthenParams(delta=d, Z=z, M=mass, hbar=hbar)
        r = x / d
        v = np.atleast_1d(v_effective(r, p, l, approx=False))
        va = np.atleast_1d(v_effective(r, p, l, approx=True))
        cent = np.atleast_1d(centrifugal(r, p, l, approx=False))
        diff = np.abs(va - v)
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(v != 0, diff / np.abs(v), np.inf)
            crel = np.where(cent > 0, diff / cent, 0.0)
        for i in range(samples):
            records.append({
                "delta": float(d),
                "dr": float(x[i]),
                "r": float(r[i]),
                "v_eff": float(v[i]),
                "v_eff_approx": float(va[i]),
                "rel_diff": float(rel[i]),
                "centrifugal_rel_err": float(crel[i]),
            })
    return records


def cmd_potential_curve(args) -> int:
    if any(d <= 0 for d in args.deltas):
        raise argparse.ArgumentTypeError("screening values must be positive")
    records = potential_curve_records(args.deltas, args.l, args.dr_min, args.dr_max,
                                      args.samples, args.z, args.mass, args.hbar)
    cols = ["delta", "dr", "r", "v_eff", "v_eff_approx", "rel_diff", "centrifugal_rel_err"]
    emit(records, cols, args.format)
    return 0


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub}


def parse_affine(text: str, name: str) -> tuple[float, float]:
    """Parse an expression affine in ``name`` into ``(constant, slope)``.

    Accepts numbers, the parameter, ``+ - * /`` and parentheses, e.g.
    ``"-1 - 2*E"`` or ``"(3 + 2E)/2"`` (implicit ``2E`` is allowed).
    """
    import re

    src = re.sub(rf"(\d)\s*({re.escape(name)})\b", r"\1*\2", text.strip())
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse coefficient {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return (float(node.value), 0.0)
        if isinstance(node, ast.Name) and node.id == name:
            return (0.0, 1.0)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            a, b = ev(node.operand)
            return (-a, -b) if isinstance(node.op, ast.USub) else (a, b)
        if isinstance(node, ast.BinOp):
            l, r = ev(node.left), ev(node.right)
            if type(node.op) in _BINOPS:
                f = _BINOPS[type(node.op)]
                return (f(l[0], r[0]), f(l[1], r[1]))
            if isinstance(node.op, ast.Mult):
                if l[1] and r[1]:
                    raise ValueError(f"{text!r} is not affine in {name}")
                return (l[0] * r[0], l[0] * r[1] + l[1] * r[0])
            if isinstance(node.op, ast.Div):
                if r[1]:
                    raise ValueError(f"{text!r} divides by {name}")
                return (l[0] / r[0], l[1] / r[0])
        raise ValueError(f"unsupported term in coefficient {text!r}")

    return ev(tree)


def parse_coefficients(text: str, name: str) -> list[tuple[float, float]]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise ValueError("empty coefficient list")
    return [parse_affine(t, name) for t in parts]


def rational_family(lam_num, lam_den, s_num, s_den, domain=(-math.inf, math.inf)):
    """Energy family with lambda0, s0 given as ratios of affine-coefficient polynomials."""

    def family(energy):
        E = np.asarray(energy, dtype=float)

        def poly(coeffs):
            return [a + b * E for a, b in coeffs]

        def lam0(x0, order):
            return jet_polynomial(poly(lam_num), x0, order) / jet_polynomial(poly(lam_den), x0, order)

        def s0(x0, order):
            return jet_polynomial(poly(s_num), x0, order) / jet_polynomial(poly(s_den), x0, order)

        return aim.AimProblem(lam0, s0, domain)

    return family


def cmd_aim_run(args) -> int:
    name = args.param
    try:
        parts = [parse_coefficients(t, name) for t in (args.lambda0_num, args.lambda0_den,
                                                       args.s0_num, args.s0_den)]
    except ValueError as exc:
        args.parser.error(str(exc))
    family = rational_family(*parts)
    lo, hi = args.bracket
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", aim.AimConvergenceWarning)
            history = aim.root_history(family, args.x0, args.k_min, args.k_max, (lo, hi), args.grid)
            stable = aim.stable_from_history(history, args.tol)
    except PoleError as exc:
        raise CliError(f"pole at x0={args.x0}: {exc}") from exc
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    records = []
    ks = sorted(history)
    for k in ks:
        prev = history.get(k - 1)
        for r in history[k]:
            drift = min(abs(r - q) for q in prev) if prev else None
            records.append({"kind": "history", "k": k, "root": r, "drift": drift,
                            "k_stabilized": None})
    for s in stable:
        records.append({"kind": "stable", "k": ks[-1], "root": s.root, "drift": None,
                        "k_stabilized": s.k_stabilized})
    if not records:
        print("no roots found", file=sys.stderr if args.format != "text" else sys.stdout)
        if args.format == "text":
            return 0
    emit(records, ["kind", "k", "root", "drift", "k_stabilized"], args.format)
    return 0


def cmd_wavefunction(args) -> int:
    state = args.state
    p = _params(args, args.delta)
    if not energy_closed(state, p).bound:
        raise CliError(f"state {state.label} is not bound at delta={p.delta}")
    r = np.linspace(args.r_min, args.r_max, args.samples)
    u = np.atleast_1d(wavefunction_u(state, p, r, normalize=not args.raw))
    records = [{"r": float(ri), "u": float(ui)} for ri, ui in zip(r, u)]
    emit(records, ["r", "u"], args.format)
    return 0


# -- parser -------------------------------------------------------------


def _state(text: str):
    try:
        return spectroscopic(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _columns(text: str) -> list[str]:
    if text == "all":
        return list(COLUMNS)
    cols = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in cols if c not in COLUMNS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown column(s) {bad}; choose from {COLUMNS}")
    return cols


def _deltas(text: str) -> list[float]:
    return [_positive(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hulthen-aim", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    units = argparse.ArgumentParser(add_help=False)
    units.add_argument("--z", type=_positive, default=1.0, help="atomic number Z")
    units.add_argument("--mass", type=_positive, default=1.0)
    units.add_argument("--hbar", type=_positive, default=1.0)
    numerics = argparse.ArgumentParser(add_help=False)
    numerics.add_argument("--grid-points", type=int, default=DEFAULT_POINTS)
    numerics.add_argument("--tol", type=_positive, default=DEFAULT_TOL)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigenvalue", parents=[common, units, numerics],
                       help="energy of one state")
    p.add_argument("state", type=_state, help="spectroscopic label, e.g. 2p")
    p.add_argument("delta", type=_positive)
    p.add_argument("--method", choices=METHODS, default="closed")
    p.add_argument("--strict", action="store_true", help="exit 1 for unbound states")
    p.add_argument("--z0", type=float, default=0.5, help="AIM evaluation point in (0, 1)")
    p.set_defaults(func=cmd_eigenvalue)

    p = sub.add_parser("table", parents=[common, units, numerics],
                       help="print a reference table with computed columns")
    p.add_argument("table", type=int, choices=(1, 2))
    p.add_argument("--columns", type=_columns, default=list(COLUMNS))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("potential-curve", parents=[common, units],
                       help="exact vs approximated effective potential")
    p.add_argument("--deltas", type=_deltas, default=list(FIGURE_DELTAS))
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--dr-min", type=_positive, default=0.05)
    p.add_argument("--dr-max", type=_positive, default=10.0)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_potential_curve)

    p = sub.add_parser("aim-run", parents=[common],
                       help="AIM root scan for rational lambda0, s0")
    p.add_argument("--lambda0-num", required=True, help="ascending coefficients, e.g. '-1-2E,5+2E'")
    p.add_argument("--lambda0-den", default="1")
    p.add_argument("--s0-num", required=True)
    p.add_argument("--s0-den", default="1")
    p.add_argument("--param", default="E", help="name of the energy parameter")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--bracket", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--grid", type=int, default=aim.DEFAULT_GRID)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_aim_run)

    p = sub.add_parser("wavefunction", parents=[common, units], help="(r, u) samples of a state")
    p.add_argument("state", type=_state)
    p.add_argument("delta", type=_positive)
    p.add_argument("--r-min", type=_positive, default=0.01)
    p.add_argument("--r-max", type=_positive, default=50.0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--raw", action="store_true", help="skip normalization")
    p.set_defaults(func=cmd_wavefunction)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.parser = parser
    if args.command == "aim-run":
        if args.k_min < 0 or args.k_max <= args.k_min:
            parser.error("need 0 <= --k-min < --k-max")
        if not args.bracket[1] > args.bracket[0]:
            parser.error("--bracket needs LO < HI")
        if args.grid < 2:
            parser.error("--grid must be at least 2")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
