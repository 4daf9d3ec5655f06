"""Leapfrog finite differences for u_tt = c(x,t)^2 u_xx.

This is the independent oracle for the closed-form solutions: initial
data and Dirichlet boundary values come from an exact solution (method of
manufactured solutions) and the numerical field is compared against it
at the final time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import CFLError, InstabilityError
from .jets import seeds
from .speeds import WaveSpeed

SPEED_SAMPLES = 64


@dataclass(frozen=True)
class Grid1D:
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("Grid1D needs b > a")
        if self.n < 8:
            raise ValueError("Grid1D needs at least 8 cells")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n + 1)

    def refined(self, factor: int = 2) -> "Grid1D":
        return Grid1D(self.a, self.b, self.n * factor)


@dataclass
class Field2D:
    grid: Grid1D
    times: np.ndarray
    values: np.ndarray  # shape (len(times), n + 1)
    dt: float
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]


def max_speed(speed: WaveSpeed, a: float, b: float, t0: float, t1: float,
              samples: int = SPEED_SAMPLES) -> float:
    """max |c| over the space-time box by dense sampling."""
    xs = np.linspace(a, b, samples)
    ts = np.linspace(t0, t1, samples)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    return float(np.max(np.abs(speed.values(X, T))))


def _as_array(data, x):
    if callable(data):
        return np.asarray(data(x), dtype=float) * np.ones_like(x)
    arr = np.asarray(data, dtype=float)
    if arr.shape != x.shape:
        raise ValueError(f"initial data has shape {arr.shape}, grid has {x.shape}")
    return arr


def leapfrog_solve(speed: WaveSpeed, phi, psi, boundary: Callable[[float], Sequence[float]],
                   grid: Grid1D, t_end: float, cfl: float = 0.9, t0: float = 0.0,
                   store: bool = True) -> Field2D:
    """Integrate from t0 to t_end with the three-level leapfrog scheme.

    ``phi``/``psi`` are u and u_t at t0 (callables of x or arrays on the
    grid); ``boundary(t)`` returns the Dirichlet values (u(a, t), u(b, t)).
    The step is the largest dt <= cfl h / max c that lands on t_end.
    """
    if not 0.0 < cfl <= 1.0:
        raise CFLError(f"cfl must lie in (0, 1], got {cfl}")
    if not t_end > t0:
        raise ValueError("t_end must exceed t0")
    h = grid.h
    cmax = max_speed(speed, grid.a, grid.b, t0, t_end)
    if not (cmax > 0 and math.isfinite(cmax)):
        raise CFLError(f"max wave speed on the box is {cmax}")
    nsteps = max(1, math.ceil((t_end - t0) * cmax / (cfl * h) - 1e-9))
    dt = (t_end - t0) / nsteps
    x = grid.x

    u_prev = _as_array(phi, x)
    v0 = _as_array(psi, x)
    c2 = speed.values(x, np.full_like(x, t0)) ** 2
    u_xx = np.zeros_like(x)
    u_xx[1:-1] = (u_prev[2:] - 2 * u_prev[1:-1] + u_prev[:-2]) / h ** 2
    u_curr = u_prev + dt * v0 + 0.5 * dt ** 2 * c2 * u_xx
    u_curr[0], u_curr[-1] = boundary(t0 + dt)

    history = [u_prev.copy(), u_curr.copy()] if store else []
    lam2 = (dt / h) ** 2
    for level in range(1, nsteps):
        t = t0 + level * dt
        c2 = speed.values(x, np.full_like(x, t)) ** 2
        u_next = np.empty_like(u_curr)
        u_next[1:-1] = (2 * u_curr[1:-1] - u_prev[1:-1]
                        + lam2 * c2[1:-1] * (u_curr[2:] - 2 * u_curr[1:-1] + u_curr[:-2]))
        u_next[0], u_next[-1] = boundary(t + dt)
        if not np.all(np.isfinite(u_next)):
            raise InstabilityError(level + 1, t + dt)
        u_prev, u_curr = u_curr, u_next
        if store:
            history.append(u_curr.copy())

    times = t0 + dt * np.arange(nsteps + 1) if store else np.array([t_end])
    values = np.array(history) if store else u_curr[None, :]
    meta = {"speed": speed.to_dict(), "scheme": "leapfrog", "cfl": cfl,
            "courant": dt * cmax / h, "max_speed": cmax, "steps": nsteps}
    return Field2D(grid, times, values, dt, meta)


def manufactured(u, speed: WaveSpeed, grid: Grid1D, t0: float, t_end: float,
                 cfl: float = 0.9) -> tuple[Field2D, float, float]:
    """Solve with data taken from the exact solution ``u``; return (field, max_error, l2_error)."""
    x = grid.x

    def exact(t):
        xs, ts = seeds(x, np.full_like(x, t), order=1)
        return u(xs, ts)

    start = exact(t0)
    phi = np.asarray(start.f, dtype=float) * np.ones_like(x)
    psi = np.asarray(start.f_t, dtype=float) * np.ones_like(x)

    def boundary(t):
        xs, ts = seeds(np.array([grid.a, grid.b]), np.array([t, t]), order=0)
        vals = np.asarray(u(xs, ts).value, dtype=float) * np.ones(2)
        return vals[0], vals[1]

    fld = leapfrog_solve(speed, phi, psi, boundary, grid, t_end, cfl, t0, store=False)
    err = fld.final - np.asarray(exact(t_end).value, dtype=float)
    return fld, float(np.max(np.abs(err))), float(np.sqrt(np.mean(err ** 2)))


def convergence_order(errors: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    if len(errors) < 3:
        raise ValueError("need at least three (h, error) pairs")
    hs = np.array([e[0] for e in errors], dtype=float)
    es = np.array([e[1] for e in errors], dtype=float)
    ratios = hs[:-1] / hs[1:]
    if not np.allclose(ratios, 2.0, rtol=1e-9):
        raise ValueError("h must halve from one entry to the next")
    if np.any(es <= 0):
        raise ValueError("errors must be positive")
    slope, _ = np.polyfit(np.log(hs), np.log(es), 1)
    return float(slope)


# Boxes where each closed-form family is smooth and away from singular lines.
# (a, b, t0, t_end); for N1GEN/N2GEN the time variable is T.  CONST15 is
# checked through its pullback by Q, which solves the c = x^2 equation.
FD_BOXES = {
    "CONST15": (1.0, 2.0, 0.0, 0.3),
    "QUAD17": (1.0, 2.0, 0.0, 0.3),
    "DELTA0": (1.0, 2.0, 1.0, 1.3),
    "DELTA+1": (2.0, 3.0, 2.0, 2.3),
    "DELTA-1": (0.0, 1.0, 0.0, 0.3),
    "N1GEN": (1.0, 2.0, 1.0, 1.3),
    "N2GEN": (1.0, 2.0, 1.0, 1.3),
}


def convergence_study(u, speed: WaveSpeed, a: float, b: float, t0: float, t_end: float,
                      n0: int = 20, levels: int = 3, cfl: float = 0.9) -> dict:
    """Errors at h, h/2, h/4, ... and the fitted order."""
    rows = []
    grid = Grid1D(a, b, n0)
    for _ in range(levels):
        _, emax, el2 = manufactured(u, speed, grid, t0, t_end, cfl)
        rows.append({"h": grid.h, "max_error": emax, "l2_error": el2})
        grid = grid.refined()
    order = convergence_order([(r["h"], r["max_error"]) for r in rows])
    return {"rows": rows, "order": order,
            "box": {"a": a, "b": b, "t0": t0, "t_end": t_end}, "cfl": cfl, "n0": n0}
