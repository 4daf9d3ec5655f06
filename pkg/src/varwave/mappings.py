"""Catalog of mappings between variable-speed wave equations.

Two kinds of mapping live here.

:class:`PointMapping` is an invertible change of coordinates together with
a multiplicative change of the dependent variable,
``new = multiplier(old) * u(old)``.  Coordinate maps and multipliers are
written against the jet API, so a mapped solution is again jet-evaluable
and second derivatives in the new coordinates come out exactly.

:class:`NonlocalMapping` relates a solution u(x, t) of
``u_tt / c(x)^2 = u_xx`` to a solution B(x, T) of a wave equation with
speed ``T^p c(x)`` through the seed solution ``u = t``::

    U = u / t,   beta = U_t,   beta = (g1 t^-2 + g2 t) B,   t = 3 T^e.

B cannot be turned back into u pointwise; u is recovered only up to an
integration in T, which this module checks in derivative form:

    d/dT (T^a u(x, t(T))) = kappa T^q B(x, T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .errors import DomainError, MappingError, NotInvertibleError, ValidityError
from .grids import Region
from .jets import Jet, Jet2, elementary, seeds

INF = math.inf

Field = Callable[[Jet2, Jet2], Jet2]
CoordMap = Callable[[object, object], tuple]


def _pow(v, p: float):
    if isinstance(v, Jet):
        return v.power(p)
    v = np.asarray(v, dtype=float)
    if not np.all(v > 0):
        raise DomainError(f"power {p:g} of non-positive base")
    return np.power(v, p)


def _box(names, xlo=-INF, xhi=INF, tlo=-INF, thi=INF) -> Region:
    return Region(names, (xlo, tlo), (xhi, thi))


@dataclass(frozen=True)
class PointMapping:
    id: str
    forward: CoordMap
    inverse: CoordMap
    multiplier: Callable
    validity: Callable  # (a, b) -> bool array, in source coordinates
    source_vars: tuple[str, str] | None
    target_vars: tuple[str, str] | None
    formula: str = ""
    source: str = ""
    target: str = ""
    region_text: str = ""
    params: dict = field(default_factory=dict)

    def coords(self, a, b):
        """Forward coordinate map on plain numbers."""
        return tuple(_plain(v) for v in self.forward(a, b))

    def valid(self, a, b):
        return _safe_validity(self.validity, a, b)

    def describe(self) -> dict:
        return {"id": self.id, "kind": "point", "formula": self.formula,
                "source": self.source, "target": self.target,
                "validity": self.region_text, "params": dict(self.params)}


def _plain(v):
    v = v.value if isinstance(v, Jet) else v
    return float(v) if np.ndim(v) == 0 else np.asarray(v)


def _safe_validity(pred, a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    try:
        with np.errstate(all="ignore"):
            return np.asarray(pred(a, b), dtype=bool) & np.isfinite(a) & np.isfinite(b)
    except DomainError:
        if a.ndim == 0 and b.ndim == 0:
            return np.asarray(False)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=bool)
        for i in np.ndindex(a.shape):
            out[i] = bool(_safe_validity(pred, a[i], b[i]))
        return out


def _region_validity(region: Region):
    return region.contains


@dataclass(frozen=True)
class NonlocalMapping:
    """Non-invertible mapping built from the seed solution u = t.

    ``t = t_scale * T**t_exponent``; the derivative-form integral relation is
    ``d/dT(T**relation_power * u) = kappa * T**relation_q * B``.
    """

    id: str
    gamma1: float
    gamma2: float
    t_exponent: Fraction
    relation_power: Fraction
    relation_q: Fraction
    kappa: float
    target_p: Fraction
    t_scale: float = 3.0
    formula: str = ""
    source_vars: tuple[str, str] = ("x", "t")
    target_vars: tuple[str, str] = ("x", "T")

    def __post_init__(self):
        if self.gamma1 == 0 and self.gamma2 == 0:
            raise ValueError("gamma1 and gamma2 cannot both vanish")

    def t_of_T(self, T):
        return self.t_scale * _pow(T, float(self.t_exponent))

    def T_of_t(self, t):
        return _pow(t / self.t_scale, float(1 / self.t_exponent))

    def beta_weight(self, t):
        out = 0.0
        if self.gamma1:
            out = out + self.gamma1 * _pow(t, -2.0)
        if self.gamma2:
            out = out + self.gamma2 * t
        return out

    def coords(self, x, T):
        return x, _plain(self.t_of_T(T))

    def valid(self, x, T):
        return (np.asarray(T) > 0) & np.isfinite(x)

    def describe(self) -> dict:
        return {"id": self.id, "kind": "nonlocal", "formula": self.formula,
                "source": "u_tt/c(x)^2 = u_xx",
                "target": f"B_TT/(T^({2 * self.target_p}) c(x)^2) = B_xx",
                "validity": "t>0, T>0",
                "params": {"gamma1": self.gamma1, "gamma2": self.gamma2,
                           "t_of_T": f"{self.t_scale:g}*T^({self.t_exponent})",
                           "kappa": self.kappa,
                           "relation": f"d/dT(T^({self.relation_power}) u) = kappa T^({self.relation_q}) B",
                           "speed_power": str(self.target_p)}}


@dataclass(frozen=True)
class CompositeMapping:
    """A point mapping applied after a nonlocal one, e.g. Q after N1."""

    id: str
    outer: PointMapping
    inner: NonlocalMapping
    formula: str = ""

    def coords(self, x, T):
        return self.outer.coords(*self.inner.coords(x, T))

    def describe(self) -> dict:
        return {"id": self.id, "kind": "composite", "formula": self.formula,
                "source": "V_xi_eta = 0",
                "target": f"B_TT/(T^({2 * self.inner.target_p}) x^4) = B_xx",
                "validity": "x>0, T>0",
                "params": {"outer": self.outer.id, "inner": self.inner.id}}


Mapping = Union[PointMapping, NonlocalMapping, CompositeMapping]


# ---------------------------------------------------------------------------
# invertible mappings

def _m1():
    return PointMapping(
        "M1",
        forward=lambda x, t: (-1.0 / x, t),
        inverse=lambda X, t: (-1.0 / X, t),
        multiplier=lambda x, t: 1.0 / x,
        validity=_region_validity(_box(("x", "t"), xlo=0.0)),
        source_vars=("x", "t"), target_vars=("X", "t"),
        formula="x = -1/X, t = t, u = -(1/X) sigma(X, t)",
        source="u_tt/c(x)^2 = u_xx", target="sigma_tt/(X^4 c(-1/X)^2) = sigma_XX",
        region_text="x>0")


def _m2():
    return PointMapping(
        "M2",
        forward=lambda x, t: (x, -1.0 / t),
        inverse=lambda x, T: (x, -1.0 / T),
        multiplier=lambda x, t: 1.0 / t,
        validity=_region_validity(_box(("x", "t"), tlo=0.0)),
        source_vars=("x", "t"), target_vars=("x", "T"),
        formula="x = x, t = -1/T, u = -(1/T) sigma(x, T)",
        source="u_tt/c(x)^2 = u_xx", target="sigma_TT/(T^-4 c(x)^2) = sigma_xx",
        region_text="t>0")


def _m3():
    return PointMapping(
        "M3",
        forward=lambda x, t: (-1.0 / x, -1.0 / t),
        inverse=lambda X, T: (-1.0 / X, -1.0 / T),
        multiplier=lambda x, t: 1.0 / (x * t),
        validity=_region_validity(_box(("x", "t"), xlo=0.0, tlo=0.0)),
        source_vars=("x", "t"), target_vars=("X", "T"),
        formula="x = -1/X, t = -1/T, u = sigma(X, T)/(X T)",
        source="u_tt/c(x)^2 = u_xx", target="sigma_TT/(X^4 T^-4 c(-1/X)^2) = sigma_XX",
        region_text="x>0, t>0")


def _q():
    return PointMapping(
        "Q",
        forward=lambda x, t: (1.0 / x + t, 1.0 / x - t),
        inverse=lambda xi, eta: (2.0 / (xi + eta), 0.5 * (xi - eta)),
        multiplier=lambda x, t: 1.0 / x,
        validity=_region_validity(_box(("x", "t"), xlo=0.0)),
        source_vars=("x", "t"), target_vars=("xi", "eta"),
        formula="xi = 1/x + t, eta = 1/x - t, V = u/x",
        source="u_tt/x^4 = u_xx", target="V_xi_eta = 0",
        region_text="x>0")


def _d0():
    return PointMapping(
        "D0",
        forward=lambda x, t: (1.0 / x + 1.0 / t, 1.0 / x - 1.0 / t),
        inverse=lambda xi, eta: (2.0 / (xi + eta), 2.0 / (xi - eta)),
        multiplier=lambda x, t: 1.0 / (x * t),
        validity=_region_validity(_box(("x", "t"), xlo=0.0, tlo=0.0)),
        source_vars=("x", "t"), target_vars=("xi", "eta"),
        formula="xi = 1/x + 1/t, eta = 1/x - 1/t, V = u/(x t)",
        source="u_tt/c^2 = u_xx, c = x^2/t^2", target="V_xi_eta = 0",
        region_text="x>0, t>0", params={"delta": 0.0})


_COMPONENTS = ("above", "below", "inner")


def _component_interval(rho: float, comp: str):
    if comp == "above":
        return rho, INF
    if comp == "below":
        return -INF, -rho
    if comp == "inner":
        return -rho, rho
    raise ValueError(f"component must be one of {_COMPONENTS}, got {comp!r}")


def _dpos(rho: float = 1.0, components: tuple[str, str] = ("above", "above")):
    if rho <= 0:
        raise ValueError("rho must be positive")
    cx, ct = components
    xlo, xhi = _component_interval(rho, cx)
    tlo, thi = _component_interval(rho, ct)

    def A(z):
        return 0.5 * rho * elementary("log", abs((z - rho) / (z + rho)))

    def A_inv(a, comp):
        w = elementary("exp", 2.0 * a / rho)
        if comp == "inner":
            return rho * (1.0 - w) / (1.0 + w)
        return rho * (1.0 + w) / (1.0 - w)

    def forward(x, t):
        ax, at = A(x), A(t)
        return ax - at, ax + at

    def inverse(xi, eta):
        return A_inv(0.5 * (xi + eta), cx), A_inv(0.5 * (eta - xi), ct)

    def multiplier(x, t):
        return _pow(abs((x * x - rho * rho) * (t * t - rho * rho)), -0.5)

    return PointMapping(
        "DPOS", forward, inverse, multiplier,
        validity=_region_validity(_box(("x", "t"), xlo, xhi, tlo, thi)),
        source_vars=("x", "t"), target_vars=("xi", "eta"),
        formula=("xi = log|(x-rho)/(x+rho)|^(rho/2) - log|(t-rho)/(t+rho)|^(rho/2), "
                 "eta = log|(x-rho)/(x+rho)|^(rho/2) + log|(t-rho)/(t+rho)|^(rho/2), "
                 "V = |(x^2-rho^2)(t^2-rho^2)|^(-1/2) u"),
        source="u_tt/c^2 = u_xx, c = (x^2-rho^2)/(t^2-rho^2)", target="V_xi_eta = 0",
        region_text=_box(("x", "t"), xlo, xhi, tlo, thi).describe_text(),
        params={"rho": rho, "delta": rho * rho, "components": list(components)})


def _dneg(rho: float = 1.0):
    if rho <= 0:
        raise ValueError("rho must be positive")

    def A(z):
        return rho * elementary("atan", z / rho)

    def A_inv(a):
        return rho * elementary("tan", a / rho)

    def forward(x, t):
        ax, at = A(x), A(t)
        return ax - at, ax + at

    def inverse(xi, eta):
        return A_inv(0.5 * (xi + eta)), A_inv(0.5 * (eta - xi))

    def multiplier(x, t):
        return _pow((x * x + rho * rho) * (t * t + rho * rho), -0.5)

    return PointMapping(
        "DNEG", forward, inverse, multiplier,
        validity=_region_validity(_box(("x", "t"))),
        source_vars=("x", "t"), target_vars=("xi", "eta"),
        formula=("xi = rho atan(x/rho) - rho atan(t/rho), eta = rho atan(x/rho) + rho atan(t/rho), "
                 "V = ((x^2+rho^2)(t^2+rho^2))^(-1/2) u"),
        source="u_tt/c^2 = u_xx, c = (x^2+rho^2)/(t^2+rho^2)", target="V_xi_eta = 0",
        region_text="everywhere", params={"rho": rho, "delta": -rho * rho})


IDENTITY = PointMapping(
    "I", forward=lambda a, b: (a, b), inverse=lambda a, b: (a, b),
    multiplier=lambda a, b: 1.0 + 0.0 * a,
    validity=lambda a, b: np.ones(np.broadcast(a, b).shape, dtype=bool),
    source_vars=None, target_vars=None, formula="identity", region_text="everywhere")


# ---------------------------------------------------------------------------
# nonlocal mappings
#
# kappa in d/dT(T^a u) = kappa T^q B, with B = beta / (g1 t^-2 + g2 t), beta = (u/t)_t.
# N1 (g1=0, g2=1, t = 3 T^(-1/3), a = 1/3):
#   T^(1/3) u = 3 u/t = 3U, so d/dT(3U) = 3 beta dt/dT = 3 t B (-t^4/81) = -t^5 B/27,
#   and t^5 = 243 T^(-5/3), giving -9 T^(-5/3) B.
# N2 (g1=1, g2=0, t = 3 T^(1/3), a = -1/3):
#   T^(-1/3) u = 3U, so d/dT(3U) = 3 t^-2 B (9/t^2) = 27 t^-4 B,
#   and t^-4 = T^(-4/3)/81, giving (1/3) T^(-4/3) B.
KAPPA_N1 = -9.0
KAPPA_N2 = 1.0 / 3.0


def _n1():
    return NonlocalMapping(
        "N1", gamma1=0.0, gamma2=1.0, t_exponent=Fraction(-1, 3),
        relation_power=Fraction(1, 3), relation_q=Fraction(-5, 3), kappa=KAPPA_N1,
        target_p=Fraction(-4, 3),
        formula="x = x, t = 3 T^(-1/3), u = T^(-1/3) int T^(-5/3) B dT")


def _n2():
    return NonlocalMapping(
        "N2", gamma1=1.0, gamma2=0.0, t_exponent=Fraction(1, 3),
        relation_power=Fraction(-1, 3), relation_q=Fraction(-4, 3), kappa=KAPPA_N2,
        target_p=Fraction(-2, 3),
        formula="x = x, t = 3 T^(1/3), u = T^(1/3) int T^(-4/3) B dT")


def catalog(rho: float = 1.0, dpos_components: tuple[str, str] = ("above", "above")) -> list[Mapping]:
    """All eleven mappings: M1 M2 M3 Q D0 DPOS DNEG N1 N2 C1 C2."""
    q, n1, n2 = _q(), _n1(), _n2()
    c1 = compose(q, n1)
    c2 = compose(q, n2)
    c1 = replace(c1, id="C1", formula="xi = 1/x + 3 T^(-1/3), eta = 1/x - 3 T^(-1/3), "
                                      "V = (T^(-1/3)/x) int T^(-5/3) B dT")
    c2 = replace(c2, id="C2", formula="xi = 1/x + 3 T^(1/3), eta = 1/x - 3 T^(1/3), "
                                      "V = (T^(1/3)/x) int T^(-4/3) B dT")
    return [_m1(), _m2(), _m3(), q, _d0(), _dpos(rho, dpos_components), _dneg(rho),
            n1, n2, c1, c2]


CATALOG_IDS = ("M1", "M2", "M3", "Q", "D0", "DPOS", "DNEG", "N1", "N2", "C1", "C2")


def get(mapping_id: str, **kwargs) -> Mapping:
    for m in catalog(**kwargs):
        if m.id == mapping_id:
            return m
    raise MappingError(f"unknown mapping id {mapping_id!r}; known: {', '.join(CATALOG_IDS)}")


# ---------------------------------------------------------------------------
# operations

def apply_point(m: PointMapping, u: Field) -> Field:
    """Transformed dependent variable as a function of the new coordinates."""
    if not isinstance(m, PointMapping):
        raise MappingError(f"{m.id} is not a point mapping")

    def sigma(a: Jet2, b: Jet2) -> Jet2:
        try:
            x, t = m.inverse(a, b)
        except DomainError as exc:
            raise ValidityError(f"{m.id}: point outside the mapped region ({exc.reason})") from None
        if not np.all(m.valid(_plain(x), _plain(t))):
            raise ValidityError(f"{m.id}: preimage outside validity region {m.region_text}")
        return m.multiplier(x, t) * u(x, t)

    return sigma


def invert(m: Mapping) -> PointMapping:
    """Swap forward and inverse and invert the multiplier rule."""
    if not isinstance(m, PointMapping):
        raise NotInvertibleError(f"{m.id} is a non-invertible (nonlocal) mapping")

    def multiplier(a, b):
        return 1.0 / m.multiplier(*m.inverse(a, b))

    def validity(a, b):
        x, t = m.inverse(a, b)
        return m.valid(_plain(x), _plain(t))

    name = m.id[4:-1] if m.id.startswith("inv(") else f"inv({m.id})"
    return replace(m, id=name, forward=m.inverse, inverse=m.forward, multiplier=multiplier,
                   validity=validity, source_vars=m.target_vars, target_vars=m.source_vars,
                   source=m.target, target=m.source,
                   region_text=f"image of {m.region_text}" if m.region_text else "")


def compose(outer: PointMapping, inner: Mapping) -> Mapping:
    """Apply ``inner`` first, then ``outer``."""
    if not isinstance(outer, PointMapping):
        raise MappingError("the outer mapping of a composition must be a point mapping")
    if isinstance(inner, NonlocalMapping):
        if outer.source_vars not in (None, inner.source_vars):
            raise MappingError(f"domain mismatch: {outer.id} acts on {outer.source_vars}, "
                               f"{inner.id} relates {inner.source_vars}")
        return CompositeMapping(f"{outer.id}*{inner.id}", outer, inner)
    if not isinstance(inner, PointMapping):
        raise MappingError(f"cannot compose {outer.id} with {inner.id}")
    if outer.id == "I":
        return inner
    if inner.id == "I":
        return outer
    if inner.target_vars != outer.source_vars:
        raise MappingError(f"domain mismatch: {inner.id} produces {inner.target_vars}, "
                           f"{outer.id} expects {outer.source_vars}")

    def forward(a, b):
        return outer.forward(*inner.forward(a, b))

    def inverse(a, b):
        return inner.inverse(*outer.inverse(a, b))

    def multiplier(a, b):
        return outer.multiplier(*inner.forward(a, b)) * inner.multiplier(a, b)

    def validity(a, b):
        mid = inner.coords(a, b)
        return inner.valid(a, b) & outer.valid(*mid)

    return PointMapping(
        f"{outer.id}*{inner.id}", forward, inverse, multiplier, validity,
        source_vars=inner.source_vars, target_vars=outer.target_vars,
        formula=f"({outer.formula}) after ({inner.formula})",
        source=inner.source, target=outer.target, region_text=inner.region_text)


def push_forward_nonlocal(n: NonlocalMapping, u: Field) -> Field:
    """B(x, T) = (u/t)_t / (g1 t^-2 + g2 t) at t = t(T).

    The t-derivative is taken as U_T / t'(T) on the composed jet, so an
    order-3 jet of u yields an order-2 jet of B.
    """
    if not isinstance(n, NonlocalMapping):
        raise MappingError(f"{n.id} is not a nonlocal mapping")

    def B(x: Jet2, T: Jet2) -> Jet2:
        if not np.all(np.asarray(T.value) > 0):
            raise ValidityError(f"{n.id}: requires T > 0")
        t = n.t_of_T(T)
        U = u(x, t) / t
        beta = U.diff(1) / t.diff(1)
        return beta / n.beta_weight(t.truncate(beta.order))

    return B


def check_integral_relation(n: NonlocalMapping, u: Field, B: Field, point) -> float:
    """|d/dT(T^a u(x, t(T))) - kappa T^q B(x, T)| at one (x, T) point."""
    x0, T0 = point
    if not T0 > 0:
        raise ValidityError("integral relation is checked on T > 0 only")
    x, T = seeds(x0, T0)
    lhs = (T.power(float(n.relation_power)) * u(x, n.t_of_T(T))).diff(1).value
    rhs = n.kappa * T0 ** float(n.relation_q) * B(x, T).value
    return float(abs(lhs - rhs))


def transport(m: Mapping, solution: Field) -> Field:
    """Carry a solution of the source equation across ``m``.

    Point mappings act by :func:`apply_point`; for Q/D0/DPOS/DNEG the
    source is taken on the V_xi_eta = 0 side and pulled back.  Nonlocal
    mappings push forward; composites pull V back through the outer map and
    push the result through the inner one.
    """
    if isinstance(m, NonlocalMapping):
        return push_forward_nonlocal(m, solution)
    if isinstance(m, CompositeMapping):
        return push_forward_nonlocal(m.inner, apply_point(invert(m.outer), solution))
    if m.target_vars == ("xi", "eta"):
        return apply_point(invert(m), solution)
    return apply_point(m, solution)
