"""Command-line front end: JSON files in, JSON or CSV out."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from ._rational import as_fraction, fmt_extreal, fmt_rational
from .cu_model import (
    MeasureMap,
    QTPoint,
    SuiteParams,
    axiom_suite,
    d_tau,
    gamma_h,
    realize_suite,
    spectrum_fullness_check,
    total_violations,
)
from .errors import CuLabError
from .measures import BRUTEFORCE_MAX_ATOMS, Measure1D, lp_bruteforce, lp_distance
from .rank_lattice import (
    RankFunction,
    cc_cutdown,
    cc_global,
    cc_local,
    is_compact,
    strict_gap_interval,
    witness_insertion,
)
from .spectral import du_formula, lp_orbit_distance, matrix_from_json, orbit_distance_sorted, snapped_spectrum

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3

CSV_COLUMNS = {
    "cc": ["global", "local", "cutdown"],
    "lp": ["lo", "hi", "bruteforce"],
    "gamma": ["kind", "values", "d_tau"],
    "axioms": ["axiom", "instances", "violations"],
    "realize": ["axiom", "instances", "violations"],
    "weyl": ["sorted", "lp_lo", "lp_hi"],
    "du": ["estimate", "lower", "argmax", "mesh", "points"],
    "fullness": ["grid", "vertices", "cells", "positive", "min_mass", "ok"],
}

EPILOG = "CSV columns (one header row, then data rows):\n" + "\n".join(
    f"  {cmd:<9}{','.join(cols)}" for cmd, cols in CSV_COLUMNS.items()) + """

Exit codes: 0 clean, 1 violations found, 2 input error, 3 precondition error.
CU_LAB_THREADS caps the number of worker processes used by the suites."""


class InputError(Exception):
    pass


def _load(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse(path: str, builder):
    data = _load(path)
    try:
        return builder(data)
    except CuLabError:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: {type(exc).__name__}: {exc}") from exc


def _tol(raw: str) -> Fraction:
    try:
        t = as_fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad tolerance {raw!r}") from exc
    if t <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return t


def _positive(raw: str) -> int:
    n = int(raw)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _tau(raw: str) -> QTPoint:
    try:
        return QTPoint(tuple(as_fraction(p) for p in raw.split(",")))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad quasitrace {raw!r}: {exc}") from exc


# commands -----------------------------------------------------------------

def cmd_cc(args):
    f = _parse(args.f, RankFunction.from_json)
    g = _parse(args.g, RankFunction.from_json)
    out = {"global": cc_global(f, g), "local": cc_local(f, g)}
    if g.is_bounded():
        out["cutdown"] = cc_cutdown(f, g)
    if out["global"]:
        out["witness"] = witness_insertion(f, g).to_json()
        if not is_compact(g):
            gap = strict_gap_interval(f, g)
            out["gap_interval"] = {"interval": gap.interval.to_json(), "case": gap.case,
                                   "witness": gap.witness.to_json()}
    rows = [[out["global"], out["local"], out.get("cutdown", "")]]
    return out, rows, EXIT_OK


def cmd_lp(args):
    mu = _parse(args.mu, Measure1D.from_json)
    nu = _parse(args.nu, Measure1D.from_json)
    enc = lp_distance(mu, nu, args.tol)
    out = {"lo": fmt_rational(enc.lo), "hi": fmt_rational(enc.hi)}
    if mu.is_atomic() and nu.is_atomic() and len(mu.atoms) + len(nu.atoms) <= BRUTEFORCE_MAX_ATOMS:
        out["bruteforce"] = fmt_rational(lp_bruteforce(mu, nu))
    return out, [[out["lo"], out["hi"], out.get("bruteforce", "")]], EXIT_OK


def cmd_gamma(args):
    h = _parse(args.h, MeasureMap.from_json)
    f = _parse(args.f, RankFunction.from_json)
    x = gamma_h(h, f, require_faithful=not args.no_faithful_gate)
    out = x.to_json()
    dval = ""
    if args.tau is not None:
        dval = fmt_extreal(d_tau(x, args.tau))
        out = {**out, "tau": args.tau.to_json(), "d_tau": dval}
    kind, vals = next(iter(x.to_json().items()))
    vals = vals if isinstance(vals, int) else " ".join(str(v) for v in vals)
    return out, [[kind, vals, dval]], EXIT_OK


def _optional_map(path):
    return None if path is None else _parse(path, MeasureMap.from_json)


def _suite_output(report):
    rows = [[k, v["instances"], v["violations"]] for k, v in report.items()]
    return report, rows, EXIT_VIOLATIONS if total_violations(report) else EXIT_OK


def cmd_axioms(args):
    params = SuiteParams(count=args.count, seed=args.seed)
    return _suite_output(axiom_suite(_optional_map(args.h), params, exhaustive=args.exhaustive))


def cmd_realize(args):
    return _suite_output(realize_suite(_optional_map(args.h), args.count, args.seed))


def cmd_weyl(args):
    a = _parse(args.a, matrix_from_json)
    b = _parse(args.b, matrix_from_json)
    sorted_gap = orbit_distance_sorted(a, b)
    enc = lp_orbit_distance(a, b, args.tol)
    out = {"sorted": sorted_gap, "lp_lo": fmt_rational(enc.lo), "lp_hi": fmt_rational(enc.hi),
           "snap_a": snapped_spectrum(a).to_json(), "snap_b": snapped_spectrum(b).to_json()}
    return out, [[repr(sorted_gap), out["lp_lo"], out["lp_hi"]]], EXIT_OK


def cmd_du(args):
    h1 = _parse(args.h1, MeasureMap.from_json)
    h2 = _parse(args.h2, MeasureMap.from_json)
    est = du_formula(h1, h2, args.resolution or 8, args.tol)
    out = est.to_json()
    argmax = " ".join(out["argmax"]["lambda"])
    return out, [[out["estimate"], out["lower"], argmax, out["mesh"], out["points"]]], EXIT_OK


def cmd_fullness(args):
    h = _parse(args.h, MeasureMap.from_json)
    rep = spectrum_fullness_check(h, args.resolution or 64)
    out = rep.to_json()
    return out, [[out[c] for c in CSV_COLUMNS["fullness"]]], EXIT_OK if rep.ok else EXIT_VIOLATIONS


# plumbing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_tol, default=Fraction(1, 1000),
                        help="enclosure width for distances (rational or decimal, default 1/1000)")
    common.add_argument("--seed", type=int, default=0, help="suite seed (default 0)")
    common.add_argument("--count", type=_positive, default=100, help="suite instances (default 100)")
    common.add_argument("--resolution", type=_positive, default=None,
                        help="grid resolution: du barycentric mesh (default 8), fullness grid (default 64)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="cu-lab", description=__doc__, epilog=EPILOG,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *positional):
        sp = sub.add_parser(name, parents=[common], help=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        for arg in positional:
            sp.add_argument(arg)
        sp.set_defaults(func=fn)
        return sp

    add("cc", cmd_cc, "compact containment of two rank functions", "f", "g")
    add("lp", cmd_lp, "Levy-Prokhorov distance enclosure", "mu", "nu")
    g = add("gamma", cmd_gamma, "image of a rank function under gamma_h", "h", "f")
    g.add_argument("--tau", type=_tau, default=None, help="quasitrace as comma-separated weights")
    g.add_argument("--no-faithful-gate", action="store_true",
                   help="accept non-faithful vertex measures")
    ax = add("axioms", cmd_axioms, "randomized morphism-law suite")
    ax.add_argument("h", nargs="?", default=None, help="measure map (default: random per instance)")
    ax.add_argument("--exhaustive", action="store_true", help="also sweep all small rank functions")
    r = add("realize", cmd_realize, "realization identity suite")
    r.add_argument("h", nargs="?", default=None, help="measure map (default: random per instance)")
    add("weyl", cmd_weyl, "sorted-eigenvalue gap against spectral d_LP", "a", "b")
    add("du", cmd_du, "grid estimate of the uniform distance between measure maps", "h1", "h2")
    add("fullness", cmd_fullness, "positive mass on every grid cell", "h")
    return p


def _render(payload, rows, command: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS[command])
    for row in rows:
        w.writerow(["true" if v is True else "false" if v is False else v for v in row])
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, rows, code = args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CuLabError as exc:
        print(f"precondition error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    text = _render(payload, rows, args.command, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
