"""Truncated Taylor arithmetic ("jets") in one or two variables.

A jet stores the Taylor coefficients of a smooth function about a point,
truncated at total degree ``order`` (at most 3).  Arithmetic on jets is
truncated polynomial arithmetic, so sums, products, quotients and
compositions with elementary functions propagate exact derivatives.

Coefficients may be floats or numpy arrays of a common broadcastable
shape, which evaluates a whole grid of points at once.

Public accessors expose plain derivatives (``Jet1.c2`` is f'', not f''/2,
``Jet2.f_xt`` is the mixed partial), while the internal storage holds
Taylor coefficients.
"""

from __future__ import annotations

import functools
import math
from typing import Sequence

import numpy as np

from .errors import DomainError

MAX_ORDER = 3


@functools.cache
def _monomials(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    if nvars == 1:
        return tuple((k,) for k in range(order + 1))
    out = []
    for deg in range(order + 1):
        for j in range(deg + 1):
            out.append((deg - j, j))
    return tuple(out)


@functools.cache
def _index(nvars: int) -> dict[tuple[int, ...], int]:
    return {m: k for k, m in enumerate(_monomials(nvars, MAX_ORDER))}


@functools.cache
def _product_table(nvars: int, order: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    monos = _monomials(nvars, order)
    idx = _index(nvars)
    table = []
    for target in monos:
        pairs = []
        for i, a in enumerate(monos):
            rest = tuple(t - s for t, s in zip(target, a))
            if min(rest) >= 0:
                pairs.append((i, idx[rest]))
        table.append(tuple(pairs))
    return tuple(table)


def _zero(c) -> bool:
    return isinstance(c, (int, float)) and c == 0


# ---------------------------------------------------------------------------
# univariate derivative tables: name -> [f, f', f'', f'''] at v

def _check(ok, what: str):
    ok = np.asarray(ok)
    if not ok.all():
        bad = ~ok
        raise DomainError(what, bad if bad.ndim else None)


def univariate_derivatives(name: str, v, n: int = MAX_ORDER):
    """Return ``[f(v), f'(v), ..., f^(n)(v)]`` for an elementary function.

    Raises DomainError when ``v`` lies outside the function's domain.
    """
    v = float(v) if np.ndim(v) == 0 else np.asarray(v, dtype=float)
    if name == "sin":
        s, c = np.sin(v), np.cos(v)
        d = [s, c, -s, -c]
    elif name == "cos":
        s, c = np.sin(v), np.cos(v)
        d = [c, -s, -c, s]
    elif name == "exp":
        e = np.exp(v)
        d = [e, e, e, e]
    elif name == "log":
        _check(v > 0, "log of non-positive value")
        r = 1.0 / v
        d = [np.log(v), r, -r * r, 2 * r * r * r]
    elif name == "sqrt":
        _check(v > 0, "sqrt of non-positive value")
        s = np.sqrt(v)
        d = [s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)]
    elif name == "tanh":
        th = np.tanh(v)
        q = 1.0 - th * th
        d = [th, q, -2 * th * q, -2 * q * q + 4 * th * th * q]
    elif name == "atan":
        r = 1.0 / (1.0 + v * v)
        d = [np.arctan(v), r, -2 * v * r * r, -2 * r * r + 8 * v * v * r * r * r]
    elif name == "tan":
        tn = np.tan(v)
        s = 1.0 + tn * tn
        d = [tn, s, 2 * tn * s, 2 * s * s + 4 * tn * tn * s]
    elif name == "recip":
        _check(v != 0, "division by zero")
        r = 1.0 / v
        d = [r, -r * r, 2 * r ** 3, -6 * r ** 4]
    else:
        raise KeyError(name)
    return d[: n + 1]


def power_derivatives(v, p: float, n: int = MAX_ORDER):
    """Derivatives of ``v**p`` for real ``p``; requires v > 0."""
    _check(np.asarray(v) > 0, f"power {p:g} of non-positive base")
    out = []
    coef = 1.0
    for k in range(n + 1):
        out.append(coef * np.power(v, p - k))
        coef *= p - k
    return out


class Jet:
    """Truncated Taylor polynomial; see :class:`Jet1` and :class:`Jet2`."""

    nvars = 0
    __slots__ = ("coeffs", "order")
    __array_ufunc__ = None  # make ndarray (op) Jet defer to the Jet

    def __init__(self, coeffs: Sequence, order: int = MAX_ORDER):
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"jet order must lie in [0, {MAX_ORDER}]")
        n = len(_monomials(self.nvars, order))
        coeffs = list(coeffs)
        if len(coeffs) < n:
            raise ValueError(f"order-{order} jet needs {n} coefficients")
        self.coeffs = coeffs[:n]
        self.order = order

    # -- construction ------------------------------------------------------
    @classmethod
    def constant(cls, value, order: int = MAX_ORDER):
        n = len(_monomials(cls.nvars, order))
        return cls([value] + [0.0] * (n - 1), order)

    def _new(self, coeffs, order=None):
        obj = object.__new__(type(self))
        obj.order = self.order if order is None else order
        obj.coeffs = list(coeffs)
        return obj

    def truncate(self, order: int):
        if order >= self.order:
            return self
        n = len(_monomials(self.nvars, order))
        return self._new(self.coeffs[:n], order)

    # -- inspection --------------------------------------------------------
    @property
    def value(self):
        return self.coeffs[0]

    @property
    def shape(self):
        return np.broadcast_shapes(*(np.shape(c) for c in self.coeffs))

    def _coef(self, mono: tuple[int, ...]):
        if sum(mono) > self.order:
            raise ValueError(f"derivative of order {sum(mono)} exceeds jet order {self.order}")
        return self.coeffs[_index(self.nvars)[mono]]

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, coeffs={self.coeffs!r})"

    # -- arithmetic --------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise TypeError("cannot combine jets in different numbers of variables")
            return other
        return None

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            c = list(self.coeffs)
            c[0] = c[0] + other
            return self._new(c)
        order = min(self.order, o.order)
        n = len(_monomials(self.nvars, order))
        return self._new([a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])], order)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return self._new([c * other for c in self.coeffs])
        order = min(self.order, o.order)
        out = []
        for pairs in _product_table(self.nvars, order):
            acc = 0.0
            for i, j in pairs:
                a, b = self.coeffs[i], o.coeffs[j]
                if _zero(a) or _zero(b):
                    continue
                acc = acc + a * b
            out.append(acc)
        return self._new(out, order)

    __rmul__ = __mul__

    def reciprocal(self):
        return self.apply(univariate_derivatives("recip", self.value, self.order))

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            _check(np.asarray(other) != 0, "division by zero")
            return self._new([c / other for c in self.coeffs])
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return self.ipow(int(n))
        return self.power(float(n))

    def ipow(self, n: int):
        """Integer power by repeated multiplication (valid for negative bases)."""
        if n < 0:
            return self.ipow(-n).reciprocal()
        result = type(self).constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def power(self, p: float):
        """Real power ``self**p``; the value must be positive."""
        return self.apply(power_derivatives(self.value, p, self.order))

    def __abs__(self):
        v = np.asarray(self.value)
        _check(v != 0, "abs at zero")
        return self * np.sign(v)

    # -- elementary functions ---------------------------------------------
    def apply(self, derivs: Sequence):
        return compose_univariate(derivs, self)

    def _fn(self, name):
        return self.apply(univariate_derivatives(name, self.value, self.order))

    def sin(self):
        return self._fn("sin")

    def cos(self):
        return self._fn("cos")

    def tan(self):
        return self._fn("tan")

    def exp(self):
        return self._fn("exp")

    def log(self):
        return self._fn("log")

    def sqrt(self):
        return self._fn("sqrt")

    def tanh(self):
        return self._fn("tanh")

    def atan(self):
        return self._fn("atan")

    # -- calculus ----------------------------------------------------------
    def diff(self, axis: int = 0):
        """Jet of the partial derivative along ``axis``; one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        idx = _index(self.nvars)
        monos = _monomials(self.nvars, self.order - 1)
        out = []
        for m in monos:
            up = list(m)
            up[axis] += 1
            out.append(self.coeffs[idx[tuple(up)]] * up[axis])
        return self._new(out, self.order - 1)


def compose_univariate(derivs: Sequence, theta: Jet) -> Jet:
    """Jet of ``f(theta)`` given ``derivs = [f, f', f'', ...]`` evaluated at theta's value.

    The result has order ``min(theta.order, len(derivs) - 1)``: supplying
    only ``[f', f'', f''']`` yields an order-2 jet of ``f'(theta)``.
    """
    order = min(theta.order, len(derivs) - 1)
    if order < 0:
        raise ValueError("need at least the function value")
    theta = theta.truncate(order)
    delta = theta._new([0.0] + theta.coeffs[1:], order)
    # Horner: f0 + d (f1 + d (f2/2 + d f3/6))
    acc = type(theta).constant(derivs[order] / math.factorial(order), order)
    for k in range(order - 1, -1, -1):
        acc = acc * delta + derivs[k] / math.factorial(k)
    return acc


def elementary(name: str, v):
    """Apply an elementary function to a jet or to plain numbers."""
    if isinstance(v, Jet):
        return v._fn(name)
    return univariate_derivatives(name, v, 0)[0]


class Jet1(Jet):
    """Univariate jet.  Constructed from plain derivatives ``(f, f', f'', f''')``."""

    nvars = 1
    __slots__ = ()

    def __init__(self, c0, c1=0.0, c2=0.0, c3=0.0, order: int = MAX_ORDER):
        derivs = [c0, c1, c2, c3]
        super().__init__([d / math.factorial(k) for k, d in enumerate(derivs)], order)

    @classmethod
    def constant(cls, value, order: int = MAX_ORDER):
        return cls(value, order=order)

    @classmethod
    def variable(cls, value, order: int = MAX_ORDER):
        return cls(value, 1.0, order=order)

    def derivative(self, k: int):
        return self._coef((k,)) * math.factorial(k)

    @property
    def c0(self):
        return self.derivative(0)

    @property
    def c1(self):
        return self.derivative(1)

    @property
    def c2(self):
        return self.derivative(2)

    @property
    def c3(self):
        return self.derivative(3)

    def derivatives(self) -> list:
        return [self.derivative(k) for k in range(self.order + 1)]


class Jet2(Jet):
    """Bivariate jet in the ordered variables (x, t).

    Partials are exposed as ``f, f_x, f_t, f_xx, f_xt, f_tt, f_xxx, f_xxt,
    f_xtt, f_ttt``; each mixed partial is stored once.
    """

    nvars = 2
    __slots__ = ()

    @classmethod
    def from_partials(cls, f, f_x=0.0, f_t=0.0, f_xx=0.0, f_xt=0.0, f_tt=0.0,
                      f_xxx=0.0, f_xxt=0.0, f_xtt=0.0, f_ttt=0.0, order: int = MAX_ORDER):
        parts = [f, f_x, f_t, f_xx, f_xt, f_tt, f_xxx, f_xxt, f_xtt, f_ttt]
        monos = _monomials(2, MAX_ORDER)
        coeffs = [p / (math.factorial(i) * math.factorial(j)) for p, (i, j) in zip(parts, monos)]
        return cls(coeffs, order)

    @classmethod
    def variable(cls, value, axis: int, order: int = MAX_ORDER):
        """Identity seed: the coordinate function x (axis 0) or t (axis 1)."""
        n = len(_monomials(2, order))
        coeffs = [value] + [0.0] * (n - 1)
        if order >= 1:
            coeffs[1 + axis] = 1.0
        return cls(coeffs, order)

    def partial(self, i: int, j: int):
        return self._coef((i, j)) * math.factorial(i) * math.factorial(j)

    f = property(lambda self: self.value)
    f_x = property(lambda self: self.partial(1, 0))
    f_t = property(lambda self: self.partial(0, 1))
    f_xx = property(lambda self: self.partial(2, 0))
    f_xt = property(lambda self: self.partial(1, 1))
    f_tt = property(lambda self: self.partial(0, 2))
    f_xxx = property(lambda self: self.partial(3, 0))
    f_xxt = property(lambda self: self.partial(2, 1))
    f_xtt = property(lambda self: self.partial(1, 2))
    f_ttt = property(lambda self: self.partial(0, 3))

    PARTIAL_NAMES = ("f", "f_x", "f_t", "f_xx", "f_xt", "f_tt",
                     "f_xxx", "f_xxt", "f_xtt", "f_ttt")

    def partials(self) -> dict:
        monos = _monomials(2, self.order)
        return {name: self.partial(*m) for name, m in zip(self.PARTIAL_NAMES, monos)}


def seeds(x, t, order: int = MAX_ORDER) -> tuple[Jet2, Jet2]:
    """Identity seeds for the coordinates at the given point(s)."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    x, t = np.broadcast_arrays(x, t)
    if x.ndim == 0:
        x, t = float(x), float(t)
    return Jet2.variable(x, 0, order), Jet2.variable(t, 1, order)
