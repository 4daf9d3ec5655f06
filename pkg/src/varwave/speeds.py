"""Wave-speed families for u_tt = c(x,t)^2 u_xx.

The families are

* ``QuadraticX``   c = x^2 (the only x-dependent speed mappable to V_xi_eta = 0),
* ``DeltaFamily``  c = (x^2 - delta) / (t^2 - delta),
* ``TimePower``    c = t^p * c0(x) with p in {-4/3, -2/3},
* ``Profile``      a user expression in x,
* ``GeneralExpr``  a user expression in x and t.

Every speed carries an open validity box; evaluation outside it raises
:class:`~varwave.errors.ValidityError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expr as ex
from .errors import DomainError, MappingError, ValidityError
from .grids import Region
from .jets import Jet2, seeds

INF = math.inf


def _xt_region(xlo=-INF, xhi=INF, tlo=-INF, thi=INF) -> Region:
    return Region(("x", "t"), (xlo, tlo), (xhi, thi))


class WaveSpeed:
    """Common behaviour; concrete families are the dataclasses below."""

    family = ""
    region: Region
    x_only = False

    def jet(self, x: Jet2, t: Jet2) -> Jet2:
        raise NotImplementedError

    def expression(self) -> ex.Expression:
        """Defining expression over {x, t}."""
        raise NotImplementedError

    def values(self, x, t):
        xs, ts = seeds(x, t, order=0)
        return evaluate(self, xs, ts).value

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class QuadraticX(WaveSpeed):
    region: Region = field(default_factory=lambda: _xt_region(xlo=0.0))
    family = "quadratic_x"
    x_only = True

    def jet(self, x, t):
        return x * x

    def expression(self):
        return ex.BinOp("^", ex.Var("x"), ex.Num(2.0))

    def to_dict(self):
        return {"family": self.family}


def _delta_region(delta: float) -> Region:
    if delta > 0:
        rho = math.sqrt(delta)
        return _xt_region(xlo=rho, tlo=rho)
    if delta == 0:
        return _xt_region(xlo=0.0, tlo=0.0)
    return _xt_region()


@dataclass(frozen=True)
class DeltaFamily(WaveSpeed):
    delta: float
    region: Region | None = None
    family = "delta"

    def __post_init__(self):
        if self.region is None:
            object.__setattr__(self, "region", _delta_region(self.delta))

    @property
    def rho(self) -> float:
        return math.sqrt(abs(self.delta))

    def jet(self, x, t):
        return (x * x - self.delta) / (t * t - self.delta)

    def expression(self):
        x2 = ex.BinOp("^", ex.Var("x"), ex.Num(2.0))
        t2 = ex.BinOp("^", ex.Var("t"), ex.Num(2.0))
        op = "-" if self.delta >= 0 else "+"
        d = ex.Num(abs(float(self.delta)))
        return ex.BinOp("/", ex.BinOp(op, x2, d), ex.BinOp(op, t2, d))

    def to_dict(self):
        return {"family": self.family, "delta": self.delta}


@dataclass(frozen=True)
class TimePower(WaveSpeed):
    p: Fraction
    base: WaveSpeed
    region: Region | None = None
    family = "time_power"

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if not self.base.x_only:
            raise MappingError("TimePower needs an x-only base profile")
        if self.region is None:
            object.__setattr__(self, "region", self.base.region.intersect(_xt_region(tlo=0.0)))

    def jet(self, x, t):
        return t.power(float(self.p)) * self.base.jet(x, t)

    def expression(self):
        exponent = ex.BinOp("/", ex.Num(abs(self.p.numerator)), ex.Num(self.p.denominator))
        if self.p < 0:
            exponent = ex.Neg(exponent)
        return ex.BinOp("*", ex.BinOp("^", ex.Var("t"), exponent), self.base.expression())

    def to_dict(self):
        return {"family": self.family, "p": str(self.p), "base": self.base.to_dict()}


@dataclass(frozen=True)
class Profile(WaveSpeed):
    cx: ex.Expression
    region: Region = field(default_factory=_xt_region)
    family = "profile"
    x_only = True

    def __post_init__(self):
        if isinstance(self.cx, str):
            object.__setattr__(self, "cx", ex.parse(self.cx, ["x"]))
        if ex.variables(self.cx) - {"x"}:
            raise ValueError("a Profile may only depend on x")

    def jet(self, x, t):
        out = ex.evaluate(self.cx, x=x)
        return out if isinstance(out, Jet2) else Jet2.constant(out, x.order) + 0 * x

    def expression(self):
        return self.cx

    def to_dict(self):
        return {"family": self.family, "cx": ex.render(self.cx)}


@dataclass(frozen=True)
class GeneralExpr(WaveSpeed):
    cxt: ex.Expression
    region: Region = field(default_factory=_xt_region)
    family = "general"

    def __post_init__(self):
        if isinstance(self.cxt, str):
            object.__setattr__(self, "cxt", ex.parse(self.cxt, ["x", "t"]))

    def jet(self, x, t):
        return ex.eval_jet2(self.cxt, x, t) + 0 * x

    def expression(self):
        return self.cxt

    def to_dict(self):
        return {"family": self.family, "cxt": ex.render(self.cxt)}


def evaluate(speed: WaveSpeed, x_seed: Jet2, t_seed: Jet2) -> Jet2:
    """Jet of c(x, t) at the seeded point(s); checks the validity region."""
    speed.region.require(x_seed.value, t_seed.value, "speed evaluation point")
    return speed.jet(x_seed, t_seed)


def from_dict(d: dict) -> WaveSpeed:
    fam = d.get("family")
    if fam == "quadratic_x":
        return QuadraticX()
    if fam == "delta":
        return DeltaFamily(float(d["delta"]))
    if fam == "time_power":
        return TimePower(Fraction(d["p"]), from_dict(d["base"]))
    if fam == "profile":
        return Profile(d["cx"])
    if fam == "general":
        return GeneralExpr(d["cxt"])
    raise ValueError(f"unknown speed family {fam!r}")


# ---------------------------------------------------------------------------
# classification

_SAMPLE_X = (-3.1, -1.7, -0.4, 0.4, 1.7, 3.1, 5.3)
_SAMPLE_T = (-2.9, -1.3, -0.6, 0.6, 1.3, 2.9, 4.7)
_SINGULAR_GAP = 1e-3
_FIT_TOL = 1e-9
_MIN_VERIFIED = 20


def _sample(c: ex.Expression):
    xs, ts, cs = [], [], []
    for x in _SAMPLE_X:
        for t in _SAMPLE_T:
            try:
                v = float(ex.evaluate(c, x=x, t=t))
            except (DomainError, OverflowError, ZeroDivisionError):
                continue
            if math.isfinite(v):
                xs.append(x)
                ts.append(t)
                cs.append(v)
    return np.array(xs), np.array(ts), np.array(cs)


def _away_from_singular(x, t, delta):
    if delta <= 0:
        keep = np.ones_like(x, dtype=bool)
        if delta == 0:
            keep &= np.abs(t) > _SINGULAR_GAP
        return keep
    rho = math.sqrt(delta)
    return (np.abs(np.abs(x) - rho) > _SINGULAR_GAP) & (np.abs(np.abs(t) - rho) > _SINGULAR_GAP)


def _fit(x, t, c, usable):
    if not usable.any():
        return None
    gap = np.where(usable, np.abs(c - 1.0), -1.0)
    k = int(np.argmax(gap))
    if gap[k] <= 1e-12:
        return None
    return (c[k] * t[k] ** 2 - x[k] ** 2) / (c[k] - 1.0)


def classify_delta(c: ex.Expression) -> float | None:
    """Return delta if c == (x^2 - delta)/(t^2 - delta) on the sample grid, else None.

    delta is read off one sample via c (t^2 - delta) = x^2 - delta and then
    verified at every other sample away from the singular lines.
    """
    x, t, cv = _sample(c)
    if len(cv) < _MIN_VERIFIED:
        return None
    delta = _fit(x, t, cv, np.abs(cv) < 1e6)
    if delta is None:
        return None
    delta = _fit(x, t, cv, _away_from_singular(x, t, delta) & (np.abs(cv) < 1e6))
    if delta is None:
        return None
    keep = _away_from_singular(x, t, delta)
    if keep.sum() < _MIN_VERIFIED:
        return None
    lhs = cv[keep] * (t[keep] ** 2 - delta)
    rhs = x[keep] ** 2 - delta
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    if np.all(np.abs(lhs - rhs) <= _FIT_TOL * scale):
        return float(f"{delta:.12g}") + 0.0
    return None


def classify(c: ex.Expression | str) -> dict:
    """Report which family a speed expression over {x, t} belongs to."""
    if isinstance(c, str):
        c = ex.parse(c, ["x", "t"])
    delta = classify_delta(c)
    if delta is not None:
        return {"family": "delta", "delta": delta}
    if "t" in ex.variables(c):
        return {"family": "general"}
    if _matches(c, QuadraticX().expression()):
        return {"family": "quadratic_x"}
    return {"family": "profile"}


def _matches(a: ex.Expression, b: ex.Expression) -> bool:
    for x in _SAMPLE_X:
        try:
            va, vb = float(ex.evaluate(a, x=x)), float(ex.evaluate(b, x=x))
        except DomainError:
            return False
        if abs(va - vb) > 1e-12 * max(abs(va), abs(vb), 1.0):
            return False
    return True


# ---------------------------------------------------------------------------
# speeds of the transformed equations

def _inv_neg(v: float) -> float:
    """Image of an endpoint under x -> -1/x."""
    if v == 0:
        return -INF
    if math.isinf(v):
        return 0.0
    return -1.0 / v


def _neg_recip_interval(lo, hi):
    if lo >= 0 or hi <= 0:
        return _inv_neg(lo), _inv_neg(hi)
    return -INF, INF


def _x_only_expr(speed: WaveSpeed) -> ex.Expression:
    if not speed.x_only:
        raise MappingError(f"mapping needs an x-only speed c(x), got family {speed.family!r}")
    return speed.expression()


_NEG_RECIP_X = ex.Neg(ex.BinOp("/", ex.Num(1.0), ex.Var("x")))
_TPOW = {"N1": Fraction(-4, 3), "N2": Fraction(-2, 3), "C1": Fraction(-4, 3), "C2": Fraction(-2, 3)}


def transformed_speed(speed: WaveSpeed, mapping_id) -> WaveSpeed:
    """Speed of the equation reached through a catalog mapping.

    M1 -> x^2 c(-1/x); M2 -> t^-2 c(x); M3 -> x^2 t^-2 c(-1/x);
    N1 -> t^(-4/3) c(x); N2 -> t^(-2/3) c(x).  C1/C2 start from c = x^2 and
    end at the N1/N2 speeds.  Mappings onto V_xi_eta = 0 have no speed.
    """
    mid = getattr(mapping_id, "id", mapping_id)
    x2 = ex.BinOp("^", ex.Var("x"), ex.Num(2.0))
    tm2 = ex.BinOp("^", ex.Var("t"), ex.Neg(ex.Num(2.0)))
    if mid in ("M1", "M3"):
        c = ex.substitute(_x_only_expr(speed), "x", _NEG_RECIP_X)
        xlo, xhi = _neg_recip_interval(speed.region.lo[0], speed.region.hi[0])
        if mid == "M1":
            return Profile(ex.BinOp("*", x2, c), region=_xt_region(xlo, xhi))
        return GeneralExpr(ex.BinOp("*", ex.BinOp("*", x2, tm2), c), region=_xt_region(xlo, xhi))
    if mid == "M2":
        c = _x_only_expr(speed)
        return GeneralExpr(ex.BinOp("*", tm2, c),
                           region=_xt_region(speed.region.lo[0], speed.region.hi[0]))
    if mid in ("N1", "N2"):
        _x_only_expr(speed)
        return TimePower(_TPOW[mid], speed)
    if mid in ("C1", "C2"):
        if not isinstance(speed, QuadraticX):
            raise MappingError(f"{mid} starts from the c = x^2 equation")
        return TimePower(_TPOW[mid], speed)
    if mid in ("Q", "D0", "DPOS", "DNEG"):
        raise MappingError(f"{mid} maps onto the characteristic form V_xi_eta = 0, which has no speed")
    raise MappingError(f"unknown mapping id {mid!r}")
