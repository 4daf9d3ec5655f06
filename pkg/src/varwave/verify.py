"""Residuals of u_tt / c^2 = u_xx and the property-check harness.

The normalized residual at a point is

    (u_tt / c^2 - u_xx) / max(|u_tt / c^2|, |u_xx|, 1)

with all derivatives taken from Jet2 evaluation.  On the characteristic
side (V_xi_eta = 0, no speed) it is V_xi_eta / max(|V_xi_xi|, |V_eta_eta|, 1).

:func:`run_suite` drives every check over the seeded (F, G) pool and
returns a deterministic JSON-able report.  A defect can be injected to
confirm that the suites are not vacuous:

* ``perturb``    every source solution gets an extra 0.01 a^3 b^2 term,
* ``kappa``      the integral-relation constant is scaled by 1.1,
* ``sign-flip``  N1 uses t = 3 T^(+1/3) instead of 3 T^(-1/3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable

import numpy as np

from . import expr as ex
from . import fdsolve, ivp
from . import mappings as mp
from . import solutions as sol
from . import speeds as sp
from .errors import MappingError, NotInvertibleError, VarwaveError
from .grids import GridSpec
from .jets import seeds

SCHEMA_VERSION = "1"
DEFAULT_TOL = 1e-8
SUITES = ("solutions", "mappings", "integral", "roundtrip", "fd", "ivp")
DEFECTS = ("perturb", "kappa", "sign-flip")
PERTURBATION = 0.01

Field = Callable


# ---------------------------------------------------------------------------
# residuals

def _terms(J, speed, a, b):
    """(numerator, denominator) of the normalized residual from a solution jet."""
    if speed is None:
        num = J.partial(1, 1)
        den = np.maximum(np.maximum(np.abs(J.partial(2, 0)), np.abs(J.partial(0, 2))), 1.0)
        return num, den
    xs, ts = seeds(a, b, order=0)
    c = sp.evaluate(speed, xs, ts).value
    utt = J.partial(0, 2) / c ** 2
    uxx = J.partial(2, 0)
    return utt - uxx, np.maximum(np.maximum(np.abs(utt), np.abs(uxx)), 1.0)


def residual_numerator(u: Field, speed: sp.WaveSpeed | None, point) -> float:
    """u_tt/c^2 - u_xx (or V_xi_eta when ``speed`` is None); linear in u."""
    a, b = point
    xs, ts = seeds(a, b)
    num, _ = _terms(u(xs, ts), speed, a, b)
    return float(num)


def residual(u: Field, speed: sp.WaveSpeed | None, point) -> float:
    """Normalized residual at one point."""
    a, b = point
    xs, ts = seeds(a, b)
    num, den = _terms(u(xs, ts), speed, a, b)
    return float(num / den)


def residual_array(u: Field, speed, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    xs, ts = seeds(a, b)
    num, den = _terms(u(xs, ts), speed, a, b)
    return np.broadcast_to(np.asarray(num / den, dtype=float), np.broadcast(a, b).shape)


def fd_residual(u: Field, speed, point, h: float = 1e-4) -> float:
    """Normalized residual with central differences on plain values of u."""
    a, b = point

    def f(p, q):
        xs, ts = seeds(p, q, order=0)
        return float(u(xs, ts).value)

    if speed is None:
        num = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) / (4 * h * h)
        uaa = (f(a + h, b) - 2 * f(a, b) + f(a - h, b)) / h ** 2
        ubb = (f(a, b + h) - 2 * f(a, b) + f(a, b - h)) / h ** 2
        return num / max(abs(uaa), abs(ubb), 1.0)
    c = float(speed.values(a, b))
    utt = (f(a, b + h) - 2 * f(a, b) + f(a, b - h)) / h ** 2 / c ** 2
    uxx = (f(a + h, b) - 2 * f(a, b) + f(a - h, b)) / h ** 2
    return (utt - uxx) / max(abs(utt), abs(uxx), 1.0)


@dataclass
class ResidualReport:
    name: str
    grid: str
    max_residual: float
    l2_residual: float
    n_points: int
    tolerance: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (not self.failures and math.isfinite(self.max_residual)
                and self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "grid": self.grid, "max_residual": self.max_residual,
                "l2_residual": self.l2_residual, "n_points": self.n_points,
                "tolerance": self.tolerance, "failures": self.failures[:20],
                "n_failures": len(self.failures), "passed": self.passed}


def _sweep(fn, a, b):
    """Evaluate fn on flat arrays; isolate failing points instead of aborting."""
    out = np.full(a.shape, np.nan)
    failures = []
    if a.size == 0:
        return out, failures
    try:
        out[:] = fn(a, b)
        return out, failures
    except VarwaveError as exc:
        mask = getattr(exc, "mask", None)
        if a.size > 1 and mask is not None and mask.shape == a.shape and mask.any() and not mask.all():
            for i in np.flatnonzero(mask):
                failures.append({"point": [float(a[i]), float(b[i])], "reason": str(exc)})
            good = ~mask
            sub, more = _sweep(fn, a[good], b[good])
            out[good] = sub
            return out, failures + more
        if a.size == 1:
            return out, [{"point": [float(a[0]), float(b[0])], "reason": str(exc)}]
    for i in range(a.size):
        v, f = _sweep(fn, a[i:i + 1], b[i:i + 1])
        out[i] = v[0]
        failures += f
    return out, failures


def _mesh(grid):
    if isinstance(grid, str):
        grid = GridSpec.parse(grid)
    if isinstance(grid, GridSpec):
        A, B = grid.mesh()
        return A, B, grid.text()
    A, B = np.broadcast_arrays(np.asarray(grid[0], float), np.asarray(grid[1], float))
    return A, B, f"{A.size} points"


def residual_grid(u: Field, speed, grid, tolerance: float = DEFAULT_TOL,
                  name: str = "") -> ResidualReport:
    """Aggregate the normalized residual over a grid; domain failures are recorded."""
    A, B, text = _mesh(grid)
    a, b = A.ravel(), B.ravel()
    vals, failures = _sweep(lambda p, q: residual_array(u, speed, p, q), a, b)
    ok = np.isfinite(vals)
    for i in np.flatnonzero(~ok & ~np.isnan(vals)):
        failures.append({"point": [float(a[i]), float(b[i])], "reason": "non-finite residual"})
    r = np.abs(vals[ok])
    mx = float(r.max()) if r.size else math.inf
    l2 = float(np.sqrt(np.mean(r ** 2))) if r.size else math.inf
    return ResidualReport(name, text, mx, l2, int(a.size), tolerance, failures)


def merge_reports(name: str, reports: list[ResidualReport], tolerance: float) -> ResidualReport:
    n = sum(r.n_points for r in reports)
    mx = max((r.max_residual for r in reports), default=math.inf)
    l2 = math.sqrt(sum(r.l2_residual ** 2 * r.n_points for r in reports) / n) if n else math.inf
    failures = [f for r in reports for f in r.failures]
    grid = reports[0].grid if reports else ""
    return ResidualReport(name, grid, mx, l2, n, tolerance, failures)


# ---------------------------------------------------------------------------
# grids and sources

def _grid(names, lo, hi, n=16, log_second=False) -> GridSpec:
    return GridSpec.box(names, lo, hi, n, ("lin", "log" if log_second else "lin"))


def equivalence_grid(m: mp.Mapping, n: int = 16) -> GridSpec:
    """Where the target equation of ``m`` is checked (target coordinates)."""
    mid = m.id
    rho = m.params.get("rho", 1.0) if isinstance(m, mp.PointMapping) else 1.0
    if mid == "M1":
        return _grid(("X", "t"), (-2.0, -1.0), (-0.5, 1.0), n)
    if mid == "M2":
        return _grid(("x", "T"), (0.5, -2.0), (2.0, -0.5), n)
    if mid == "M3":
        return _grid(("X", "T"), (-2.0, -2.0), (-0.5, -0.5), n)
    if mid == "Q":
        return _grid(("x", "t"), (0.5, -1.0), (2.0, 1.0), n)
    if mid == "D0":
        return _grid(("x", "t"), (0.5, 0.5), (2.0, 2.0), n)
    if mid == "DPOS":
        boxes = {"above": (1.2 * rho, 3.0 * rho), "below": (-3.0 * rho, -1.2 * rho),
                 "inner": (-0.8 * rho, 0.8 * rho)}
        (xl, xh), (tl, th) = (boxes[c] for c in m.params["components"])
        return _grid(("x", "t"), (xl, tl), (xh, th), n)
    if mid == "DNEG":
        return _grid(("x", "t"), (-2.0 * rho, -2.0 * rho), (2.0 * rho, 2.0 * rho), n)
    if mid in ("N1", "C1"):
        return _grid(("x", "T"), (0.5, 0.1), (2.0, 100.0), n, log_second=True)
    if mid in ("N2", "C2"):
        return _grid(("x", "T"), (0.5, 0.01), (2.0, 10.0), n, log_second=True)
    raise MappingError(f"no check grid for mapping {mid!r}")


def _is_constant_profile(speed) -> bool:
    return isinstance(speed, sp.Profile) and not ex.variables(speed.cx)


def solution_for_speed(speed: sp.WaveSpeed, pair: sol.SolutionPair) -> sol.AnalyticSolution:
    """Closed-form solution of u_tt/c^2 = u_xx built from (F, G), where one is known."""
    if isinstance(speed, sp.QuadraticX):
        return sol.general_solution_quadratic(pair, None, region=speed.region)
    if _is_constant_profile(speed):
        return sol.dalembert_physical(pair, None, c=float(ex.evaluate(speed.cx)))
    if isinstance(speed, sp.Profile) and sp._matches(speed.cx, sp.QuadraticX().expression()):
        return sol.general_solution_quadratic(pair, None)
    if isinstance(speed, sp.DeltaFamily):
        return sol.general_solution_delta(pair, None, speed.delta)
    if isinstance(speed, sp.TimePower) and isinstance(speed.base, sp.QuadraticX):
        if speed.p == Fraction(-4, 3):
            return sol.general_solution_N1(pair, None)
        if speed.p == Fraction(-2, 3):
            return sol.general_solution_N2(pair, None)
    raise MappingError(f"no closed-form solutions available for speed {speed.to_dict()}")


def perturbed(u: Field, eps: float = PERTURBATION) -> Field:
    """u + eps a^3 b^2: the deliberate defect used to show the checks can fail."""
    def w(a, b):
        return u(a, b) + eps * a ** 3 * b ** 2
    return w


def _target_speed(m: mp.Mapping, speed: sp.WaveSpeed) -> sp.WaveSpeed:
    if isinstance(m, mp.PointMapping) and m.target_vars == ("xi", "eta"):
        _require_characteristic_source(m, speed)
        return speed
    return sp.transformed_speed(speed, m.id)


def _require_characteristic_source(m: mp.PointMapping, speed: sp.WaveSpeed):
    if m.id == "Q":
        ok = isinstance(speed, sp.QuadraticX)
    else:
        ok = isinstance(speed, sp.DeltaFamily) and abs(speed.delta - m.params["delta"]) <= 1e-12
    if not ok:
        raise MappingError(f"{m.id} does not relate speed {speed.to_dict()} to V_xi_eta = 0")


def check_mapping_equivalence(m: mp.Mapping, speed: sp.WaveSpeed, trials: int = 20,
                              seed: int = 0, tolerance: float = DEFAULT_TOL,
                              grid: GridSpec | None = None, defect: str | None = None
                              ) -> ResidualReport:
    """Push seeded solutions through ``m`` and check the target equation.

    For Q/D0/DPOS/DNEG/C1/C2 the source is V = F(xi) + G(eta) and ``speed``
    names the variable-speed side (c = x^2 for Q, C1, C2).
    """
    characteristic_source = isinstance(m, mp.CompositeMapping) or (
        isinstance(m, mp.PointMapping) and m.target_vars == ("xi", "eta"))
    if isinstance(m, mp.CompositeMapping):
        if not isinstance(speed, sp.QuadraticX):
            raise MappingError(f"{m.id} starts from V_xi_eta = 0 pulled back to c = x^2")
        target = sp.transformed_speed(speed, m.id)
    else:
        target = _target_speed(m, speed)
    grid = grid or equivalence_grid(m)
    reports = []
    for k, pair in enumerate(sol.standard_pairs(trials, seed)):
        src = sol.dalembert(pair, None) if characteristic_source else solution_for_speed(speed, pair)
        u = perturbed(src) if defect == "perturb" else src
        reports.append(residual_grid(mp.transport(m, u), target, grid, tolerance, f"{m.id}#{k}"))
    name = f"{m.id} from {speed.to_dict()['family']}"
    return merge_reports(name, reports, tolerance)


# ---------------------------------------------------------------------------
# round trips

def roundtrip_box(m: mp.PointMapping):
    """Source-coordinate box for random round-trip points."""
    rho = m.params.get("rho", 1.0)
    boxes = {
        "M1": ((0.1, -3.0), (5.0, 3.0)),
        "M2": ((-3.0, 0.1), (3.0, 5.0)),
        "M3": ((0.1, 0.1), (5.0, 5.0)),
        "Q": ((0.1, -3.0), (5.0, 3.0)),
        "D0": ((0.1, 0.1), (5.0, 5.0)),
        "DNEG": ((-5.0 * rho, -5.0 * rho), (5.0 * rho, 5.0 * rho)),
    }
    if m.id == "DPOS":
        comp = {"above": (1.05 * rho, 5.0 * rho), "below": (-5.0 * rho, -1.05 * rho),
                "inner": (-0.95 * rho, 0.95 * rho)}
        (xl, xh), (tl, th) = (comp[c] for c in m.params["components"])
        return (xl, tl), (xh, th)
    if m.id not in boxes:
        raise MappingError(f"no round-trip box for {m.id!r}")
    return boxes[m.id]


@dataclass
class RoundtripReport:
    mapping: str
    trials: int
    worst_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.worst_deviation <= self.tolerance

    def to_dict(self) -> dict:
        return {"mapping": self.mapping, "trials": self.trials,
                "worst_deviation": self.worst_deviation, "tolerance": self.tolerance,
                "passed": self.passed}


def check_roundtrip(m: mp.Mapping, trials: int = 100, seed: int = 0,
                    tolerance: float = 1e-11) -> RoundtripReport:
    """Worst |inverse(forward(p)) - p| and |forward(inverse(q)) - q| over random valid p."""
    if not isinstance(m, mp.PointMapping):
        raise NotInvertibleError(f"{m.id} is a non-invertible (nonlocal) mapping")
    lo, hi = roundtrip_box(m)
    rng = np.random.default_rng(seed)
    a = rng.uniform(lo[0], hi[0], trials)
    b = rng.uniform(lo[1], hi[1], trials)
    if not np.all(m.valid(a, b)):
        raise MappingError(f"round-trip box for {m.id} leaves its validity region")
    p, q = m.forward(a, b)
    a2, b2 = m.inverse(p, q)
    p2, q2 = m.forward(a2, b2)
    dev = max(np.max(np.abs(a2 - a)), np.max(np.abs(b2 - b)),
              np.max(np.abs(p2 - p)), np.max(np.abs(q2 - q)))
    return RoundtripReport(m.id, trials, float(dev), tolerance)


# ---------------------------------------------------------------------------
# the suite

# (family key, grid, constructor) for the general-solution residual suite.
SOLUTION_GRIDS = {
    "CONST15": ("xi:-2:2:64,eta:-2:2:64", lambda p: sol.dalembert(p, None)),
    "QUAD17": ("x:0.5:2:64,t:-1:1:64", lambda p: sol.general_solution_quadratic(p, None)),
    "DELTA0": ("x:0.5:2:64,t:0.5:2:64", lambda p: sol.general_solution_delta(p, None, 0.0)),
    "DELTA+1": ("x:1.2:3:64,t:1.2:3:64", lambda p: sol.general_solution_delta(p, None, 1.0)),
    "DELTA-1": ("x:-2:2:64,t:-2:2:64", lambda p: sol.general_solution_delta(p, None, -1.0)),
    "N1GEN": ("x:0.5:2:64,T:0.1:100:64:log", lambda p: sol.general_solution_N1(p, None)),
    "N2GEN": ("x:0.5:2:64,T:0.01:10:64:log", lambda p: sol.general_solution_N2(p, None)),
}

# Declared source speeds for each catalog mapping.
EQUIVALENCE_SOURCES = {
    "M1": ("quadratic_x", "constant"),
    "M2": ("quadratic_x", "constant"),
    "M3": ("quadratic_x", "constant"),
    "Q": ("quadratic_x",),
    "D0": ("delta",),
    "DPOS": ("delta",),
    "DNEG": ("delta",),
    "N1": ("quadratic_x",),
    "N2": ("quadratic_x",),
    "C1": ("quadratic_x",),
    "C2": ("quadratic_x",),
}

# F, G for the finite-difference and IVP checks.  (sin, cos) is avoided for
# the FD study because for delta = -1 it collapses to (x - t) + (1 - x t),
# which the scheme reproduces exactly.
FD_PAIR = ("sin(1.3*s)", "cos(0.7*s)")
IVP_PAIR = ("sin(s)", "cos(s)")
IVP_INTERVAL = (1.0, 4.0)
IVP_SAMPLES = 512
IVP_QUERY = (1.2, 2.8, 0.0, 0.1)


def _source_speed(kind: str, m: mp.Mapping) -> sp.WaveSpeed:
    if kind == "quadratic_x":
        return sp.QuadraticX()
    if kind == "constant":
        return sp.Profile("1")
    if kind == "delta":
        return sp.DeltaFamily(m.params["delta"])
    raise ValueError(kind)


def catalog_for(defect: str | None = None, **kwargs) -> list:
    maps = mp.catalog(**kwargs)
    if defect != "sign-flip":
        return maps
    n1 = next(m for m in maps if m.id == "N1")
    bad = replace(n1, t_exponent=-n1.t_exponent)
    out = []
    for m in maps:
        if m.id == "N1":
            out.append(bad)
        elif isinstance(m, mp.CompositeMapping) and m.inner.id == "N1":
            out.append(replace(m, inner=bad))
        else:
            out.append(m)
    return out


@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    metrics: dict

    def to_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed,
                "metrics": self.metrics}


def suite_solutions(tol, seed, trials, defect):
    out = []
    pairs = sol.standard_pairs(trials, seed)
    for key, (grid, build) in SOLUTION_GRIDS.items():
        reports = []
        for k, pair in enumerate(pairs):
            s = build(pair)
            u = perturbed(s) if defect == "perturb" else s
            reports.append(residual_grid(u, s.speed, grid, tol, f"{key}#{k}"))
        r = merge_reports(key, reports, tol)
        out.append(CheckResult("solutions", key, r.passed, r.to_dict()))
    return out


def suite_mappings(tol, seed, trials, defect):
    out = []
    for m in catalog_for(defect):
        for kind in EQUIVALENCE_SOURCES[m.id]:
            r = check_mapping_equivalence(m, _source_speed(kind, m), trials, seed, tol, defect=defect)
            out.append(CheckResult("mappings", f"{m.id}/{kind}", r.passed, r.to_dict()))
    return out


def kappa_fit(n: mp.NonlocalMapping, u: Field, points) -> float:
    """Least-squares kappa from d/dT(T^a u) against T^q B at the given points."""
    B = mp.push_forward_nonlocal(n, u)
    lhs, rhs = [], []
    for x0, T0 in points:
        x, T = seeds(x0, T0)
        lhs.append((T.power(float(n.relation_power)) * u(x, n.t_of_T(T))).diff(1).value)
        rhs.append(T0 ** float(n.relation_q) * B(x, T).value)
    lhs, rhs = np.array(lhs, float), np.array(rhs, float)
    return float(lhs @ rhs / (rhs @ rhs))


def suite_integral(tol, seed, trials, defect, npoints: int = 50):
    out = []
    maps = {m.id: m for m in catalog_for(defect)}
    for nid in ("N1", "N2"):
        n = maps[nid]
        if defect == "kappa":
            n = replace(n, kappa=1.1 * n.kappa)
        rng = np.random.default_rng([seed, 3 if nid == "N1" else 4])
        xs = rng.uniform(0.5, 2.0, npoints)
        Ts = np.exp(rng.uniform(math.log(0.1), math.log(10.0), npoints))
        pairs = sol.standard_pairs(npoints, seed)
        worst = 0.0
        for x0, T0, pair in zip(xs, Ts, pairs):
            u = sol.general_solution_quadratic(pair, None)
            B = mp.push_forward_nonlocal(n, u)
            xj, Tj = seeds(float(x0), float(T0))
            scale = max(abs(float((Tj.power(float(n.relation_power)) * u(xj, n.t_of_T(Tj)))
                                  .diff(1).value)), 1.0)
            worst = max(worst, mp.check_integral_relation(n, u, B, (float(x0), float(T0))) / scale)
        fit_u = sol.general_solution_quadratic(sol.SolutionPair.from_text(*FD_PAIR), None)
        fitted = kappa_fit(n, fit_u, [(0.7, 0.5), (1.1, 2.0), (1.6, 7.5)])
        rel = abs(fitted - n.kappa) / abs(n.kappa)
        passed = worst <= tol and rel <= 1e-10
        out.append(CheckResult("integral", nid, passed,
                               {"points": npoints, "max_relative_residual": worst,
                                "tolerance": tol, "kappa": n.kappa, "kappa_fit": fitted,
                                "kappa_relative_error": rel}))
    return out


def suite_roundtrip(tol, seed, trials, defect, npoints: int = 100):
    out = []
    for m in catalog_for(defect):
        if isinstance(m, mp.PointMapping):
            r = check_roundtrip(m, npoints, seed, max(tol * 1e-3, 1e-11))
            out.append(CheckResult("roundtrip", m.id, r.passed, r.to_dict()))
        else:
            try:
                mp.invert(m)
                ok = False
            except NotInvertibleError:
                ok = True
            out.append(CheckResult("roundtrip", m.id, ok, {"invert_raises": ok}))
    return out


def fd_cases(pair: sol.SolutionPair | None = None) -> dict:
    """(exact solution, speed) for each family, on the boxes in fdsolve.FD_BOXES."""
    pair = pair or sol.SolutionPair.from_text(*FD_PAIR)
    q = sol.general_solution_quadratic(pair, None)
    cases = {
        "CONST15": (mp.transport(mp.get("Q"), sol.dalembert(pair, None)), sp.QuadraticX()),
        "QUAD17": (q, q.speed),
    }
    for key, delta in (("DELTA0", 0.0), ("DELTA+1", 1.0), ("DELTA-1", -1.0)):
        s = sol.general_solution_delta(pair, None, delta)
        cases[key] = (s, s.speed)
    for key, s in (("N1GEN", sol.general_solution_N1(pair, None)),
                   ("N2GEN", sol.general_solution_N2(pair, None))):
        cases[key] = (s, s.speed)
    return cases


def suite_fd(tol, seed, trials, defect):
    out = []
    for key, (u, speed) in fd_cases().items():
        if defect == "perturb":
            u = perturbed(u)
        study = fdsolve.convergence_study(u, speed, *fdsolve.FD_BOXES[key])
        finest = study["rows"][-1]["max_error"]
        passed = 1.8 <= study["order"] <= 2.2 and finest < 1e-3
        out.append(CheckResult("fd", key, passed, study))
    return out


def ivp_error(n: int, defect: str | None = None) -> dict:
    """Recover the (sin, cos) solution from sampled data on [1, 4] and measure errors."""
    pair = sol.SolutionPair.from_text(*IVP_PAIR)
    exact = sol.general_solution_quadratic(pair, None)
    truth = perturbed(exact) if defect == "perturb" else exact
    a, b = IVP_INTERVAL
    x = np.linspace(a, b, n)
    xs, ts = seeds(x, np.zeros_like(x), order=1)
    J = exact(xs, ts)
    data = ivp.InitialData(x, J.f * np.ones_like(x), J.f_t * np.ones_like(x), 0.0)
    rec = ivp.solve_ivp_quadratic(data)
    x0, x1, t0, t1 = IVP_QUERY
    X, T = np.meshgrid(np.linspace(x0, x1, 41), np.linspace(t0, t1, 11), indexing="ij")
    inside = rec.in_domain(X, T)
    xq, tq = X[inside], T[inside]
    err = np.abs(rec(xq, tq) - truth(*seeds(xq, tq, order=0)).value)
    late = np.isclose(tq, t1)
    return {"n": n, "h": (b - a) / (n - 1), "max_error": float(err.max()),
            "max_error_late": float(err[late].max()), "points": int(inside.sum())}


def suite_ivp(tol, seed, trials, defect):
    coarse = ivp_error(IVP_SAMPLES, defect)
    fine = ivp_error(2 * IVP_SAMPLES - 1, defect)
    bound = 5.0 * coarse["h"] ** 2
    ratio = coarse["max_error_late"] / fine["max_error_late"]
    passed = coarse["max_error"] <= bound and 3.4 <= ratio <= 4.6
    return [CheckResult("ivp", "sin/cos on [1,4]", passed,
                        {"coarse": coarse, "fine": fine, "bound_5h2": bound,
                         "refinement_ratio": ratio})]


_RUNNERS = {"solutions": suite_solutions, "mappings": suite_mappings,
            "integral": suite_integral, "roundtrip": suite_roundtrip,
            "fd": suite_fd, "ivp": suite_ivp}


def run_suite(suite: str | list = "all", tol: float = DEFAULT_TOL, seed: int = 0,
              trials: int = 20, defect: str | None = None) -> dict:
    """Run the named suites and return a deterministic report."""
    names = list(SUITES) if suite in ("all", None) else (
        [s.strip() for s in suite.split(",")] if isinstance(suite, str) else list(suite))
    for s in names:
        if s not in _RUNNERS:
            raise ValueError(f"unknown suite {s!r}; expected 'all' or any of {', '.join(SUITES)}")
    if defect is not None and defect not in DEFECTS:
        raise ValueError(f"unknown defect {defect!r}; expected one of {', '.join(DEFECTS)}")
    if not (tol > 0 and trials > 0):
        raise ValueError("tolerance and trials must be positive")
    checks = []
    for s in names:
        checks += _RUNNERS[s](tol, seed, trials, defect)
    return {"schema_version": SCHEMA_VERSION, "suites": names, "seed": seed,
            "tolerance": tol, "trials": trials, "defect": defect,
            "checks": [c.to_dict() for c in checks],
            "passed": all(c.passed for c in checks)}


def format_table(report: dict) -> str:
    """Human-readable one-line-per-check summary."""
    lines = []
    for c in report["checks"]:
        m = c["metrics"]
        detail = ""
        for key in ("max_residual", "max_relative_residual", "worst_deviation", "order",
                    "refinement_ratio"):
            if key in m:
                detail = f"{key}={m[key]:.3g}"
                break
        lines.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['suite']:<10} {c['name']:<24} {detail}")
    lines.append(f"{'PASS' if report['passed'] else 'FAIL'}  overall")
    return "\n".join(lines)


__all__ = [
    "ResidualReport", "RoundtripReport", "CheckResult", "residual", "residual_numerator",
    "residual_array", "fd_residual", "residual_grid", "check_mapping_equivalence",
    "check_roundtrip", "run_suite", "solution_for_speed", "perturbed", "kappa_fit",
    "format_table",
]
