import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varwave.errors import DomainError
from varwave.jets import Jet1, Jet2, compose_univariate, elementary, seeds, univariate_derivatives


def fd4(f, x, h=1e-3):
    """Fourth-order central differences for f', f'', f'''."""
    d1 = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
    d2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
    d3 = (-f(x + 3 * h) + 8 * f(x + 2 * h) - 13 * f(x + h) + 13 * f(x - h)
          - 8 * f(x - 2 * h) + f(x - 3 * h)) / (8 * h ** 3)
    return d1, d2, d3


def coeffs(J):
    return np.array([float(c) for c in J.coeffs])


def test_variable_seed():
    x = Jet1.variable(2.0)
    assert x.derivatives() == [2.0, 1.0, 0.0, 0.0]


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5])
def test_monomials_exact(n):
    x0 = 1.7
    got = Jet1.variable(x0).ipow(n).derivatives()
    want = [x0 ** n,
            n * x0 ** (n - 1) if n >= 1 else 0.0,
            n * (n - 1) * x0 ** (n - 2) if n >= 2 else 0.0,
            n * (n - 1) * (n - 2) * x0 ** (n - 3) if n >= 3 else 0.0]
    np.testing.assert_allclose(got, want, rtol=1e-15, atol=0)


@pytest.mark.parametrize("name,x0", [
    ("sin", 0.3), ("cos", -1.1), ("exp", 0.7), ("log", 2.5), ("sqrt", 1.9),
    ("tanh", 0.4), ("atan", -0.8), ("tan", 0.6),
])
def test_elementary_against_differences(name, x0):
    f = getattr(np, {"atan": "arctan"}.get(name, name))
    got = elementary(name, Jet1.variable(x0)).derivatives()
    d1, d2, d3 = fd4(f, x0)
    assert got[0] == pytest.approx(f(x0), rel=1e-14)
    assert got[1] == pytest.approx(d1, rel=1e-6, abs=1e-8)
    assert got[2] == pytest.approx(d2, rel=1e-5, abs=1e-6)
    assert got[3] == pytest.approx(d3, rel=1e-3, abs=1e-4)


@pytest.mark.parametrize("name,v", [("log", 0.0), ("log", -1.0), ("sqrt", -0.5)])
def test_domain_errors(name, v):
    with pytest.raises(DomainError):
        univariate_derivatives(name, v)


def test_domain_error_mask_marks_entries():
    with pytest.raises(DomainError) as info:
        elementary("log", Jet1.variable(np.array([1.0, -1.0, 2.0, 0.0])))
    np.testing.assert_array_equal(info.value.mask, [False, True, False, True])


def test_power_needs_positive_base():
    with pytest.raises(DomainError):
        Jet1.variable(-2.0).power(0.5)
    assert Jet1.variable(-2.0).ipow(3).c0 == -8.0


def test_jet2_seed_partials():
    x, t = seeds(2.0, 5.0)
    p = (x * t).partials()
    assert p["f"] == 10.0 and p["f_x"] == 5.0 and p["f_t"] == 2.0 and p["f_xt"] == 1.0
    assert all(v == 0.0 for k, v in p.items() if k not in ("f", "f_x", "f_t", "f_xt"))


def test_jet2_square():
    x, t = seeds(3.0, 1.0)
    J = x * x
    assert (J.f, J.f_x, J.f_xx, J.f_t, J.f_tt) == (9.0, 6.0, 2.0, 0.0, 0.0)


def test_compose_identity_returns_theta():
    x, t = seeds(0.4, -0.3)
    theta = (x * t).sin() + x
    out = compose_univariate([theta.value, 1.0, 0.0, 0.0], theta)
    np.testing.assert_allclose(coeffs(out), coeffs(theta), rtol=0, atol=0)


def test_compose_chain_rule_mixed():
    x, t = seeds(0.9, 0.2)
    theta = x + t
    J = compose_univariate(univariate_derivatives("sin", theta.value), theta)
    assert J.f_xt == pytest.approx(-math.sin(1.1), rel=1e-15)


def test_compose_exp_of_reciprocal():
    x, t = seeds(2.0, 0.0)
    theta = 1.0 / x
    J = compose_univariate(univariate_derivatives("exp", theta.value), theta)
    f = lambda z: math.exp(1.0 / z)
    h = 1e-4
    fd = (f(2.0 + h) - 2 * f(2.0) + f(2.0 - h)) / h ** 2
    assert J.f_xx == pytest.approx(fd, rel=1e-6)


def test_diff_lowers_order():
    x, t = seeds(1.2, 0.7)
    J = (x * x * t * t * t).diff(1)
    assert J.order == 2
    assert J.f == pytest.approx(3 * 1.2 ** 2 * 0.7 ** 2)
    assert J.partial(0, 1) == pytest.approx(6 * 1.2 ** 2 * 0.7)


def test_vectorised_matches_scalar():
    xs = np.linspace(0.5, 2.0, 7)
    ts = np.linspace(-1.0, 1.0, 7)
    X, T = seeds(xs, ts)
    V = (X.exp() * T.sin() / (1 + X * X)).partials()
    for i in range(len(xs)):
        x, t = seeds(float(xs[i]), float(ts[i]))
        S = (x.exp() * t.sin() / (1 + x * x)).partials()
        for k in S:
            assert V[k][i] == pytest.approx(S[k], rel=1e-14, abs=1e-300)


finite = st.floats(-2.0, 2.0, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(finite, finite, finite, st.floats(-3, 3))
def test_product_rule(x0, t0, s, lam):
    x, t = seeds(x0, t0)
    a = (x * s + t).sin()
    b = (x - t * lam).exp()
    lhs = (a * b).partial(1, 1)
    rhs = (a.partial(1, 1) * b.f + a.f_x * b.f_t + a.f_t * b.f_x + a.f * b.partial(1, 1))
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(finite, finite, st.floats(-5, 5))
def test_linearity(x0, t0, lam):
    x, t = seeds(x0, t0)
    a, b = x.cos() * t, (x * t).tanh()
    lhs = coeffs(a + lam * b)
    rhs = coeffs(a) + lam * coeffs(b)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0))
def test_reciprocal_inverts(x0, t0):
    x, t = seeds(x0, t0)
    J = (x * t + x).reciprocal() * (x * t + x)
    np.testing.assert_allclose(coeffs(J), [1.0] + [0.0] * 9, atol=1e-12)
