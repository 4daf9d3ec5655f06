"""Closed-form general solutions built from two arbitrary functions F and G.

Each constructor returns an :class:`AnalyticSolution`, a callable taking
two :class:`~varwave.jets.Jet2` coordinates and returning the jet of the
solution.  F and G are expressions in ``s``; the B-formulas need F' and
G', which are read off the same univariate jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import expr as ex
from .grids import Region
from .jets import Jet2, compose_univariate, elementary, seeds
from .speeds import DeltaFamily, Profile, QuadraticX, TimePower, WaveSpeed

INF = math.inf
FAMILIES = ("CONST15", "QUAD17", "DELTA", "N1GEN", "N2GEN")


@dataclass(frozen=True)
class SolutionPair:
    F: ex.Expression
    G: ex.Expression
    F_text: str = ""
    G_text: str = ""

    @classmethod
    def from_text(cls, F: str, G: str) -> "SolutionPair":
        return cls(ex.parse(F, ["s"]), ex.parse(G, ["s"]), F, G)

    def combine(self, other: "SolutionPair", lam: float) -> "SolutionPair":
        """The pair (F + lam F2, G + lam G2)."""
        def lin(a, b):
            return ex.BinOp("+", a, ex.BinOp("*", _literal(lam), b))
        return SolutionPair(lin(self.F, other.F), lin(self.G, other.G))

    def texts(self) -> tuple[str, str]:
        return self.F_text or ex.render(self.F), self.G_text or ex.render(self.G)


def _literal(v: float) -> ex.Expression:
    return ex.Neg(ex.Num(-v)) if v < 0 else ex.Num(v)


def _pair(F, G) -> SolutionPair:
    if isinstance(F, SolutionPair):
        return F
    if isinstance(F, str) or isinstance(G, str):
        F = ex.parse(F, ["s"]) if isinstance(F, str) else F
        G = ex.parse(G, ["s"]) if isinstance(G, str) else G
    return SolutionPair(F, G)


@dataclass(frozen=True)
class AnalyticSolution:
    tag: str
    pair: SolutionPair
    fn: Callable[[Jet2, Jet2], Jet2]
    speed: WaveSpeed | None
    region: Region
    params: dict = field(default_factory=dict)

    @property
    def coords(self) -> tuple[str, str]:
        return self.region.names

    def __call__(self, a: Jet2, b: Jet2) -> Jet2:
        self.region.require(a.value, b.value, f"{self.tag} evaluation point")
        return self.fn(a, b)

    def values(self, a, b):
        sa, sb = seeds(a, b, order=0)
        return self(sa, sb).value

    def describe(self) -> dict:
        F, G = self.pair.texts()
        return {"family": self.tag, "F": F, "G": G, "params": dict(self.params),
                "speed": None if self.speed is None else self.speed.to_dict(),
                "validity": self.region.describe()}


def along(e: ex.Expression, theta: Jet2, k: int = 0) -> Jet2:
    """Jet of the k-th derivative of a one-variable expression composed with theta."""
    d = ex.univariate(e, theta.value)
    return compose_univariate(d[k:], theta)


def _box(names, xlo=-INF, xhi=INF, tlo=-INF, thi=INF) -> Region:
    return Region(names, (xlo, tlo), (xhi, thi))


# ---------------------------------------------------------------------------

def dalembert(F, G) -> AnalyticSolution:
    """V(xi, eta) = F(xi) + G(eta), the general solution of V_xi_eta = 0."""
    p = _pair(F, G)

    def V(xi, eta):
        return along(p.F, xi) + along(p.G, eta)

    return AnalyticSolution("CONST15", p, V, None, _box(("xi", "eta")))


def dalembert_physical(F, G, c: float = 1.0) -> AnalyticSolution:
    """u(x, t) = F(x + c t) + G(x - c t), the same family in wave form u_tt = c^2 u_xx."""
    p = _pair(F, G)
    if not c > 0:
        raise ValueError("speed must be positive")

    def u(x, t):
        return along(p.F, x + c * t) + along(p.G, x - c * t)

    return AnalyticSolution("CONST15", p, u, Profile(ex.Num(float(c))), _box(("x", "t")),
                            {"c": c})


def general_solution_quadratic(F, G, region: Region | None = None) -> AnalyticSolution:
    """u = x (F(1/x + t) + G(1/x - t)) for u_tt / x^4 = u_xx."""
    p = _pair(F, G)
    region = region or _box(("x", "t"), xlo=0.0)

    def u(x, t):
        r = 1.0 / x
        return x * (along(p.F, r + t) + along(p.G, r - t))

    return AnalyticSolution("QUAD17", p, u, QuadraticX(region), region)


def _delta_component_box(delta: float, components) -> Region:
    if delta == 0:
        return _box(("x", "t"), xlo=0.0, tlo=0.0)
    if delta < 0:
        return _box(("x", "t"))
    rho = math.sqrt(delta)
    bounds = []
    for comp in components:
        if comp == "above":
            bounds.append((rho, INF))
        elif comp == "below":
            bounds.append((-INF, -rho))
        elif comp == "inner":
            bounds.append((-rho, rho))
        else:
            raise ValueError(f"unknown component {comp!r}")
    (xlo, xhi), (tlo, thi) = bounds
    return _box(("x", "t"), xlo, xhi, tlo, thi)


def general_solution_delta(F, G, delta: float,
                           components: tuple[str, str] = ("above", "above")) -> AnalyticSolution:
    """General solution of the wave equation with c = (x^2 - delta)/(t^2 - delta).

    delta = 0:        u = x t (F(1/x + 1/t) + G(1/x - 1/t))
    delta = rho^2:    u = |(x^2-rho^2)(t^2-rho^2)|^(1/2) (F(a(x) - a(t)) + G(a(x) + a(t))),
                      a(z) = (rho/2) log|(z-rho)/(z+rho)|
    delta = -rho^2:   as above with a(z) = rho atan(z/rho) and +rho^2.
    """
    p = _pair(F, G)
    delta = float(delta)
    region = _delta_component_box(delta, components)
    rho = math.sqrt(abs(delta))

    if delta == 0:
        def u(x, t):
            rx, rt = 1.0 / x, 1.0 / t
            return x * t * (along(p.F, rx + rt) + along(p.G, rx - rt))
    elif delta > 0:
        def a(z):
            return 0.5 * rho * elementary("log", abs((z - rho) / (z + rho)))

        def u(x, t):
            ax, at = a(x), a(t)
            amp = abs((x * x - delta) * (t * t - delta)).sqrt()
            return amp * (along(p.F, ax - at) + along(p.G, ax + at))
    else:
        def a(z):
            return rho * elementary("atan", z / rho)

        def u(x, t):
            ax, at = a(x), a(t)
            amp = ((x * x - delta) * (t * t - delta)).sqrt()
            return amp * (along(p.F, ax - at) + along(p.G, ax + at))

    params = {"delta": delta}
    if delta > 0:
        params["components"] = list(components)
    return AnalyticSolution("DELTA", p, u, DeltaFamily(delta, region), region, params)


def _b_formula(p: SolutionPair, x: Jet2, T: Jet2, exponent: float, prefactor_T: bool) -> Jet2:
    k = 3.0 * T.power(exponent)
    r = 1.0 / x
    plus, minus = r + k, r - k
    core = (along(p.F, plus) + along(p.G, minus)
            + k * (along(p.G, minus, 1) - along(p.F, plus, 1)))
    return x * T * core if prefactor_T else x * core


def general_solution_N1(F, G) -> AnalyticSolution:
    """B = x T (F(1/x + 3T^(-1/3)) + G(1/x - 3T^(-1/3)) + 3T^(-1/3) (G'(.) - F'(.)))."""
    p = _pair(F, G)
    region = _box(("x", "T"), xlo=0.0, tlo=0.0)

    def B(x, T):
        return _b_formula(p, x, T, -1.0 / 3.0, True)

    return AnalyticSolution("N1GEN", p, B, TimePower(Fraction(-4, 3), QuadraticX()), region)


def general_solution_N2(F, G) -> AnalyticSolution:
    """B = x (F(1/x + 3T^(1/3)) + G(1/x - 3T^(1/3)) + 3T^(1/3) (G'(.) - F'(.)))."""
    p = _pair(F, G)
    region = _box(("x", "T"), xlo=0.0, tlo=0.0)

    def B(x, T):
        return _b_formula(p, x, T, 1.0 / 3.0, False)

    return AnalyticSolution("N2GEN", p, B, TimePower(Fraction(-2, 3), QuadraticX()), region)


def build(tag: str, F, G, delta: float | None = None, **kwargs) -> AnalyticSolution:
    """Dispatch on a family tag (case-insensitive)."""
    key = tag.upper()
    if key in ("CONST15", "DALEMBERT"):
        return dalembert(F, G)
    if key == "QUAD17":
        return general_solution_quadratic(F, G)
    if key.startswith("DELTA"):
        if delta is None:
            raise ValueError("the DELTA family needs a delta value")
        return general_solution_delta(F, G, delta, **kwargs)
    if key == "N1GEN":
        return general_solution_N1(F, G)
    if key == "N2GEN":
        return general_solution_N2(F, G)
    raise ValueError(f"unknown family {tag!r}; expected one of {', '.join(FAMILIES)}")


# ---------------------------------------------------------------------------
# the seeded (F, G) pool

POOL_KINDS = ("poly", "sin", "cos", "exp", "tanh")


def _num(v: float) -> str:
    v = round(float(v), 6)
    return f"({v!r})" if v < 0 else repr(v)


def random_function(rng: np.random.Generator) -> str:
    """One member of the standard pool, as source text in ``s``."""
    kind = POOL_KINDS[int(rng.integers(len(POOL_KINDS)))]
    if kind == "poly":
        deg = int(rng.integers(0, 4))
        coefs = rng.uniform(-1.0, 1.0, deg + 1)
        terms = [_num(coefs[0])] + [f"{_num(c)}*s^{k}" for k, c in enumerate(coefs[1:], 1)]
        return "+".join(terms)
    amp = rng.uniform(0.5, 1.5)
    freq = rng.uniform(0.5, 1.5)
    phase = rng.uniform(-0.5, 0.5)
    return f"{_num(amp)}*{kind}({_num(freq)}*s+{_num(phase)})"


def standard_pairs(n: int, seed: int = 0) -> list[SolutionPair]:
    """``n`` reproducible (F, G) pairs from the pool {cubic polynomials, sin, cos, exp, tanh}."""
    rng = np.random.default_rng(seed)
    return [SolutionPair.from_text(random_function(rng), random_function(rng)) for _ in range(n)]
