"""Exact initial-value problem for u_tt / x^4 = u_xx.

With s = 1/x the general solution is u = x (F(s + t) + G(s - t)).  Data
u(x, t0) = phi(x), u_t(x, t0) = psi(x) on [a, b] fix

    P(s) = F(s + t0) + G(s - t0) = s phi(1/s)
    D(s) = F(s + t0) - G(s - t0) = int_{1/a}^{s} r psi(1/r) dr

and F, G follow by half-sum and half-difference.  D uses the composite
trapezoid rule; F and G are natural cubic splines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from . import expr as ex
from .errors import DeterminacyError
from .jets import Jet2, compose_univariate

DEFAULT_SAMPLES = 512
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class InitialData:
    x: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    t0: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        if x.ndim != 1 or x.shape != phi.shape or x.shape != psi.shape:
            raise ValueError("x, phi and psi must be 1-d arrays of equal length")
        if len(x) < 4:
            raise ValueError("need at least 4 data points")
        if not x[0] > 0:
            raise ValueError(f"data interval must satisfy a > 0, got a = {x[0]}")
        if not np.all(np.diff(x) > 0):
            raise ValueError("sample grid must be strictly increasing")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(psi))):
            raise ValueError("phi and psi must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    @property
    def a(self) -> float:
        return float(self.x[0])

    @property
    def b(self) -> float:
        return float(self.x[-1])

    @classmethod
    def from_expressions(cls, phi: str | ex.Expression, psi: str | ex.Expression,
                         a: float, b: float, t0: float = 0.0, n: int = DEFAULT_SAMPLES):
        if not a > 0:
            raise ValueError(f"data interval must satisfy a > 0, got a = {a}")
        x = np.linspace(a, b, n)
        return cls(x, _sample(phi, x), _sample(psi, x), t0)


def _sample(e, x):
    if isinstance(e, str):
        e = ex.parse(e, ["x"])
    return np.asarray(ex.evaluate(e, x=x), dtype=float) * np.ones_like(x)


@dataclass(frozen=True)
class CharacteristicSolution:
    F: CubicSpline
    G: CubicSpline
    data: InitialData

    @property
    def s_interval(self) -> tuple[float, float]:
        return 1.0 / self.data.b, 1.0 / self.data.a

    @property
    def F_interval(self) -> tuple[float, float]:
        lo, hi = self.s_interval
        return lo + self.data.t0, hi + self.data.t0

    @property
    def G_interval(self) -> tuple[float, float]:
        lo, hi = self.s_interval
        return lo - self.data.t0, hi - self.data.t0

    def in_domain(self, x, t):
        """Domain of determinacy: both characteristic values inside the recovered intervals."""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            s = 1.0 / x
        (flo, fhi), (glo, ghi) = self.F_interval, self.G_interval
        return ((x > 0) & (s + t >= flo - _EDGE_SLACK) & (s + t <= fhi + _EDGE_SLACK)
                & (s - t >= glo - _EDGE_SLACK) & (s - t <= ghi + _EDGE_SLACK))

    def _require(self, x, t):
        if not np.all(self.in_domain(x, t)):
            raise DeterminacyError(
                "point outside the domain of determinacy: need "
                f"{self.F_interval[0]:g} <= 1/x + t <= {self.F_interval[1]:g} and "
                f"{self.G_interval[0]:g} <= 1/x - t <= {self.G_interval[1]:g}")

    def __call__(self, x, t):
        self._require(x, t)
        x = np.asarray(x, dtype=float)
        s = 1.0 / x
        return x * (self.F(s + t) + self.G(s - t))

    def jet(self, x: Jet2, t: Jet2) -> Jet2:
        """Jet-evaluable form, using the spline derivatives."""
        self._require(x.value, t.value)
        r = 1.0 / x

        def along(spline, theta):
            v = theta.value
            return compose_univariate([spline(v, k) for k in range(4)], theta)

        return x * (along(self.F, r + t) + along(self.G, r - t))

    def determinacy(self) -> dict:
        return {"a": self.data.a, "b": self.data.b, "t0": self.data.t0,
                "s_interval": list(self.s_interval),
                "F_interval": list(self.F_interval), "G_interval": list(self.G_interval)}


def solve_ivp_quadratic(data: InitialData, integration_constant: float = 0.0) -> CharacteristicSolution:
    """Recover F and G from (phi, psi) and return the evaluator of u.

    ``integration_constant`` shifts D; it moves F and G in opposite
    directions and leaves u unchanged.
    """
    s = (1.0 / data.x)[::-1]
    phi = data.phi[::-1]
    psi = data.psi[::-1]
    P = s * phi
    D = cumulative_trapezoid(s * psi, s, initial=0.0)
    D = D - D[-1] + integration_constant  # anchored at s = 1/a
    t0 = data.t0
    F = CubicSpline(s + t0, 0.5 * (P + D), bc_type="natural")
    G = CubicSpline(s - t0, 0.5 * (P - D), bc_type="natural")
    return CharacteristicSolution(F, G, data)
