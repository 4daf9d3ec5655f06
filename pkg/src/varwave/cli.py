"""Command-line front end: ``varwave {solve,ivp,verify,compare,classify,catalog}``.

Output conventions

* CSV files have one header row; floats use Python's shortest round-trip repr.
  Columns: solve ``x,t,u``; ivp ``x,t,u``; compare ``h,max_error,l2_error``.
* JSON documents carry ``schema_version`` and are written with sorted keys,
  so equal inputs give byte-identical files.
* ``--out PATH`` sends CSV to PATH (default stdout) and writes the JSON
  header next to it as ``PATH.json``.  ``--json [PATH]`` writes the JSON
  document to PATH, or to stdout when no path is given; in that case CSV
  goes only to ``--out``.

Exit codes: 0 success, 1 validation or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import fdsolve, ivp, mappings, solutions, speeds, verify
from .errors import VarwaveError
from .grids import GridSpec
from .jets import seeds

SCHEMA_VERSION = verify.SCHEMA_VERSION
STDOUT = "-"

SOLVE_FAMILIES = ("CONST15", "QUAD17", "DELTA", "N1GEN", "N2GEN")
DEFAULT_SOLVE_GRIDS = {
    "CONST15": "xi:-2:2:32,eta:-2:2:32",
    "QUAD17": "x:0.5:2:32,t:-1:1:32",
    "N1GEN": "x:0.5:2:32,T:0.1:100:32:log",
    "N2GEN": "x:0.5:2:32,T:0.01:10:32:log",
}
DEFAULTS = {
    "F": "sin(s)", "G": "cos(s)", "tol": verify.DEFAULT_TOL, "seed": 0, "trials": 20,
    "suite": "all", "components": "above,above", "n": ivp.DEFAULT_SAMPLES, "t0": 0.0,
    "n0": 20, "levels": 3, "cfl": 0.9, "rho": 1.0,
}


class UsageError(Exception):
    """Bad flag combination discovered after argparse; exit code 2."""


# ---------------------------------------------------------------------------
# serialization

def _clean(obj):
    """Make a report strict-JSON: non-finite floats become null, numpy scalars plain."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(doc: dict) -> str:
    return json.dumps(_clean({"schema_version": SCHEMA_VERSION, **doc}),
                      sort_keys=True, indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _write(path: str | None, text: str):
    if path in (None, STDOUT):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _emit(args, doc: dict, csv_body: str | None = None):
    """Route CSV and JSON according to --out / --json."""
    js = dumps(doc)
    if csv_body is None:
        _write(args.json if args.json else None, js)
        return
    if args.out:
        _write(args.out, csv_body)
        _write(args.json or args.out + ".json", js)
    elif args.json:
        _write(args.json, js)
    else:
        _write(None, csv_body)


# ---------------------------------------------------------------------------
# commands

def _grid(args, default: str | None) -> GridSpec:
    text = args.grid or default
    if text is None:
        raise UsageError("--grid is required for this family")
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _family(args) -> str:
    if not args.family:
        raise UsageError("--family is required")
    fam = args.family.upper()
    if fam.startswith("DELTA"):
        return "DELTA"
    if fam not in SOLVE_FAMILIES:
        raise UsageError(f"--family must be one of {', '.join(SOLVE_FAMILIES)}")
    return fam


def _components(args) -> tuple[str, str]:
    parts = tuple(p.strip() for p in args.components.split(","))
    if len(parts) != 2:
        raise UsageError("--components takes two comma-separated names, e.g. above,above")
    return parts


def _build_solution(args) -> solutions.AnalyticSolution:
    fam = _family(args)
    pair = solutions.SolutionPair.from_text(args.F, args.G)
    if fam == "DELTA":
        if args.delta is None:
            raise UsageError("--delta is required for the DELTA family")
        return solutions.general_solution_delta(pair, None, args.delta, _components(args))
    return solutions.build(fam, pair, None)


def _delta_default_grid(delta: float, components) -> str:
    if delta == 0:
        return "x:0.5:2:32,t:0.5:2:32"
    if delta < 0:
        r = math.sqrt(-delta)
        return f"x:{-2 * r!r}:{2 * r!r}:32,t:{-2 * r!r}:{2 * r!r}:32"
    r = math.sqrt(delta)
    box = {"above": (1.2 * r, 3 * r), "below": (-3 * r, -1.2 * r), "inner": (-0.8 * r, 0.8 * r)}
    (xl, xh), (tl, th) = (box[c] for c in components)
    return f"x:{xl!r}:{xh!r}:32,t:{tl!r}:{th!r}:32"


def cmd_solve(args) -> int:
    s = _build_solution(args)
    fam = _family(args)
    default = (_delta_default_grid(args.delta, _components(args)) if fam == "DELTA"
               else DEFAULT_SOLVE_GRIDS[fam])
    grid = _grid(args, default)
    A, B = grid.mesh()
    s.region.require(A, B, "grid")
    u = s.values(A, B)
    rows = zip(A.ravel(), B.ravel(), np.broadcast_to(u, A.shape).ravel())
    doc = {"command": "solve", **s.describe(), "grid": grid.text(),
           "columns": ["x", "t", "u"], "coordinates": list(s.coords)}
    _emit(args, doc, csv_text(("x", "t", "u"), rows))
    return 0


def _load_data_csv(path: str, t0: float) -> ivp.InitialData:
    arr = np.genfromtxt(path, delimiter=",", names=True)
    names = arr.dtype.names or ()
    for col in ("x", "phi", "psi"):
        if col not in names:
            raise ValueError(f"data file {path} needs columns x, phi, psi")
    return ivp.InitialData(arr["x"], arr["phi"], arr["psi"], t0)


def cmd_ivp(args) -> int:
    if args.data:
        data = _load_data_csv(args.data, args.t0)
    else:
        if args.phi is None or args.psi is None or args.a is None or args.b is None:
            raise UsageError("ivp needs --phi, --psi, --a, --b (or --data FILE)")
        data = ivp.InitialData.from_expressions(args.phi, args.psi, args.a, args.b, args.t0, args.n)
    rec = ivp.solve_ivp_quadratic(data)
    a, b = data.a, data.b
    grid = _grid(args, f"x:{a!r}:{b!r}:32,t:{data.t0!r}:{data.t0 + 0.25 * (1 / a - 1 / b)!r}:9")
    A, B = grid.mesh()
    inside = rec.in_domain(A, B)
    if not inside.any():
        det = rec.determinacy()
        raise VarwaveError(f"no query point lies in the domain of determinacy "
                           f"(F on {det['F_interval']}, G on {det['G_interval']})")
    xs, ts = A[inside], B[inside]
    rows = zip(xs, ts, rec(xs, ts))
    doc = {"command": "ivp", "determinacy": rec.determinacy(), "grid": grid.text(),
           "samples": int(len(data.x)), "points": int(inside.sum()),
           "skipped_outside_domain": int((~inside).sum()), "columns": ["x", "t", "u"]}
    _emit(args, doc, csv_text(("x", "t", "u"), rows))
    return 0


def cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, args.tol, args.seed, args.trials, args.inject)
    doc = {"command": "verify", **report}
    if args.json:
        _write(args.json, dumps(doc))
    if args.json != STDOUT:
        sys.stdout.write(verify.format_table(report) + "\n")
    return 0 if report["passed"] else 1


def _compare_case(args):
    fam = _family(args)
    pair = solutions.SolutionPair.from_text(args.F, args.G)
    if fam == "DELTA":
        if args.delta is None:
            raise UsageError("--delta is required for the DELTA family")
        key = {0.0: "DELTA0", 1.0: "DELTA+1", -1.0: "DELTA-1"}.get(float(args.delta))
        s = solutions.general_solution_delta(pair, None, args.delta, _components(args))
        return key, s, s.speed
    cases = verify.fd_cases(pair)
    u, speed = cases[fam]
    return fam, u, speed


def cmd_compare(args) -> int:
    key, u, speed = _compare_case(args)
    if args.grid:
        g = _grid(args, None)
        a, b, n0, t0, t1 = g.first.lo, g.first.hi, g.first.n, g.second.lo, g.second.hi
    elif key is not None:
        (a, b, t0, t1), n0 = fdsolve.FD_BOXES[key], args.n0
    else:
        raise UsageError("--grid x:a:b:n0,t:t0:t_end:1 is required for this delta")
    study = fdsolve.convergence_study(u, speed, a, b, t0, t1, n0, args.levels, args.cfl)
    rows = [(r["h"], r["max_error"], r["l2_error"]) for r in study["rows"]]
    doc = {"command": "compare", "family": _family(args), "F": args.F, "G": args.G,
           "delta": args.delta, "speed": speed.to_dict(), **study,
           "columns": ["h", "max_error", "l2_error"]}
    _emit(args, doc, csv_text(("h", "max_error", "l2_error"), rows))
    return 0


def cmd_classify(args) -> int:
    if not args.c:
        raise UsageError("--c is required")
    result = speeds.classify(args.c)
    doc = {"command": "classify", "c": args.c, **result}
    if args.json or args.out:
        _write(args.json or args.out, dumps(doc))
    else:
        sys.stdout.write(json.dumps(_clean(result), sort_keys=True) + "\n")
    return 0


def cmd_catalog(args) -> int:
    entries = [m.describe() for m in mappings.catalog(rho=args.rho)]
    if args.json or args.out:
        _write(args.json or args.out, dumps({"command": "catalog", "mappings": entries}))
    else:
        for e in entries:
            sys.stdout.write(f"{e['id']:<5} {e['kind']:<10} {e['formula']}\n")
    return 0


COMMANDS = {"solve": cmd_solve, "ivp": cmd_ivp, "verify": cmd_verify,
            "compare": cmd_compare, "classify": cmd_classify, "catalog": cmd_catalog}


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of option values; flags override it")
    common.add_argument("--out", help="CSV output path (default stdout)")
    common.add_argument("--json", nargs="?", const=STDOUT, default=None,
                        help="write the JSON document to PATH, or stdout without a PATH")
    common.add_argument("--family")
    common.add_argument("--mapping")
    common.add_argument("--F")
    common.add_argument("--G")
    common.add_argument("--c")
    common.add_argument("--delta", type=float)
    common.add_argument("--components", help="delta>0 components, e.g. above,above")
    common.add_argument("--grid", help='"x:a:b:n,t:a:b:n[:log]"')
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)

    p = argparse.ArgumentParser(prog="varwave", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="evaluate a general solution on a grid")
    s = sub.add_parser("ivp", parents=[common], help="exact IVP for c = x^2")
    s.add_argument("--phi")
    s.add_argument("--psi")
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--t0", type=float)
    s.add_argument("--n", type=int, help="samples for expression data")
    s.add_argument("--data", help="CSV with columns x, phi, psi")
    s = sub.add_parser("verify", parents=[common], help="run the property suite")
    s.add_argument("--suite", help=f"all, or a comma list of {', '.join(verify.SUITES)}")
    s.add_argument("--trials", type=int)
    s.add_argument("--inject", choices=verify.DEFECTS, help="inject a deliberate defect")
    s = sub.add_parser("compare", parents=[common], help="FD convergence study against the exact solution")
    s.add_argument("--n0", type=int)
    s.add_argument("--levels", type=int)
    s.add_argument("--cfl", type=float)
    sub.add_parser("classify", parents=[common], help="classify a wave-speed expression")
    s = sub.add_parser("catalog", parents=[common], help="list the mapping catalog")
    s.add_argument("--rho", type=float)
    return p


def _apply_config(args, parser):
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(cfg, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in cfg.items():
            key = key.replace("-", "_")
            if not hasattr(args, key) or key in ("command", "config"):
                raise UsageError(f"config key {key!r} is not an option of {args.command}")
            if getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _validate(args):
    for key in ("tol", "trials", "n", "n0", "levels", "cfl", "rho"):
        v = getattr(args, key, None)
        if v is not None and not v > 0:
            raise UsageError(f"--{key} must be positive, got {v}")
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise UsageError("--seed must be non-negative")
    if getattr(args, "a", None) is not None and getattr(args, "b", None) is not None:
        if not 0 < args.a < args.b:
            raise ValueError(f"need 0 < a < b, got a={args.a}, b={args.b}")


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args, parser)
        _validate(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"varwave {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (VarwaveError, ValueError, OSError) as exc:
        print(f"varwave {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
