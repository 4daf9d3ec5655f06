import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varwave import expr as ex
from varwave.errors import DomainError, ParseError
from varwave.jets import Jet, Jet1, seeds


def test_parse_sum_of_power():
    e = ex.parse("s^2+1", ["s"])
    assert e == ex.BinOp("+", ex.BinOp("^", ex.Var("s"), ex.Num(2.0)), ex.Num(1.0))


def test_unary_minus_binds_looser_than_power():
    assert ex.parse("-x^2", ["x"]) == ex.Neg(ex.BinOp("^", ex.Var("x"), ex.Num(2.0)))
    assert ex.evaluate(ex.parse("-x^2", ["x"]), x=3.0) == -9.0


def test_power_right_associative():
    assert ex.evaluate(ex.parse("2^3^2", []), ) == 512.0


def test_disallowed_variable():
    with pytest.raises(ParseError, match="q") as info:
        ex.parse("sin(q)", ["s"])
    assert info.value.offset == 4


def test_unknown_function():
    with pytest.raises(ParseError, match="foo"):
        ex.parse("foo(s)", ["s"])


@pytest.mark.parametrize("src", ["", "s+", "(s", "s)", "2**s", "sin s", "s..2", "1e"])
def test_malformed(src):
    with pytest.raises(ParseError):
        ex.parse(src, ["s"])


def test_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        ex.parse("é", ["s"])
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        ex.parse("s+é+q", ["s"])
    assert info.value.offset == 2


def test_jet1_square():
    out = ex.eval_jet1(ex.parse("s^2", ["s"]), Jet1(3.0, 1.0))
    assert out.derivatives() == [9.0, 6.0, 2.0, 0.0]


def test_jet1_sine_at_zero():
    out = ex.eval_jet1(ex.parse("sin(s)", ["s"]), Jet1(0.0, 1.0))
    assert out.derivatives() == [0.0, 1.0, 0.0, -1.0]


def test_jet1_exp_times_s_matches_differences():
    f = lambda s: s * math.exp(s)
    s0, h = 0.7, 1e-3
    d1 = (-f(s0 + 2 * h) + 8 * f(s0 + h) - 8 * f(s0 - h) + f(s0 - 2 * h)) / (12 * h)
    d2 = (-f(s0 + 2 * h) + 16 * f(s0 + h) - 30 * f(s0) + 16 * f(s0 - h) - f(s0 - 2 * h)) / (12 * h * h)
    out = ex.eval_jet1(ex.parse("exp(s)*s", ["s"]), Jet1.variable(s0)).derivatives()
    assert out[1] == pytest.approx(d1, rel=1e-7)
    assert out[2] == pytest.approx(d2, rel=1e-7)
    # closed form (s + k) e^s for the k-th derivative
    assert out[3] == pytest.approx((s0 + 3) * math.exp(s0), rel=1e-14)


def test_jet2_ratio_of_squares_matches_differences():
    e = ex.parse("x^2/t^2", ["x", "t"])
    x0, t0, h = 1.5, 0.5, 1e-3
    J = ex.eval_jet2(e, *seeds(x0, t0))
    f = lambda x, t: x * x / (t * t)
    # exact partials of x^2 t^-2
    exact = {"f": f(x0, t0), "f_x": 2 * x0 / t0 ** 2, "f_t": -2 * x0 ** 2 / t0 ** 3,
             "f_xx": 2 / t0 ** 2, "f_xt": -4 * x0 / t0 ** 3, "f_tt": 6 * x0 ** 2 / t0 ** 4,
             "f_xxx": 0.0, "f_xxt": -4 / t0 ** 3, "f_xtt": 12 * x0 / t0 ** 4,
             "f_ttt": -24 * x0 ** 2 / t0 ** 5}
    for k, v in J.partials().items():
        assert v == pytest.approx(exact[k], rel=1e-12, abs=1e-12)
    fd_xt = (f(x0 + h, t0 + h) - f(x0 + h, t0 - h) - f(x0 - h, t0 + h) + f(x0 - h, t0 - h)) / (4 * h * h)
    assert J.f_xt == pytest.approx(fd_xt, rel=1e-5)


def test_integer_exponent_of_negative_base():
    assert ex.evaluate(ex.parse("x^3", ["x"]), x=-2.0) == -8.0
    assert ex.evaluate(ex.parse("x^-2", ["x"]), x=-2.0) == 0.25


def test_fractional_exponent_of_negative_base():
    with pytest.raises(DomainError, match="x"):
        ex.evaluate(ex.parse("x^0.5", ["x"]), x=-2.0)


def test_domain_error_names_subexpression():
    with pytest.raises(DomainError) as info:
        ex.evaluate(ex.parse("1+log(s-2)", ["s"]), s=1.0)
    assert "log" in str(info.value)


def test_vectorised_evaluation():
    e = ex.parse("sin(s)*s", ["s"])
    s = np.linspace(-1, 1, 5)
    np.testing.assert_allclose(ex.evaluate(e, s=s), np.sin(s) * s, rtol=1e-15)


def test_univariate_derivatives_list():
    d = ex.univariate(ex.parse("s^3", ["s"]), 2.0)
    assert [float(v) for v in d] == [8.0, 12.0, 12.0, 6.0]


def test_substitute_and_variables():
    e = ex.parse("x^2+x", ["x"])
    r = ex.substitute(e, "x", ex.parse("t+1", ["t"]))
    assert ex.variables(r) == {"t"}
    assert ex.evaluate(r, t=1.0) == 6.0


# random expressions for round-trip properties

def _exprs(names):
    leaves = st.one_of(
        st.sampled_from(names).map(ex.Var),
        st.integers(0, 9).map(lambda v: ex.Num(float(v))),
        st.sampled_from([0.5, 1.25, 3.75]).map(ex.Num),
    )

    def grow(children):
        return st.one_of(
            st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda a: ex.BinOp(*a)),
            children.map(ex.Neg),
            st.tuples(st.sampled_from(sorted(ex.FUNCTIONS)), children).map(lambda a: ex.Call(*a)),
        )

    return st.recursive(leaves, grow, max_leaves=8)


@settings(max_examples=200, deadline=None)
@given(_exprs(["x", "t"]))
def test_render_parse_roundtrip(e):
    text = ex.render(e)
    once = ex.parse(text, ["x", "t"])
    assert ex.parse(ex.render(once), ["x", "t"]) == once
    assert ex.render(once) == text


def _safe(names):
    """Expressions over {+,-,*,sin,cos,exp} of bounded depth; defined everywhere."""
    leaves = st.one_of(st.sampled_from(names).map(ex.Var),
                       st.sampled_from([0.5, 1.0, 2.0]).map(ex.Num))

    def grow(children):
        return st.one_of(
            st.tuples(st.sampled_from("+-*"), children, children).map(lambda a: ex.BinOp(*a)),
            st.tuples(st.sampled_from(["sin", "cos", "exp"]), children).map(lambda a: ex.Call(*a)),
        )

    return st.recursive(leaves, grow, max_leaves=5)


@settings(max_examples=100, deadline=None)
@given(_safe(["s"]), st.floats(-0.7, 0.7))
def test_jet_matches_finite_differences(e, s0):
    f = lambda s: float(ex.evaluate(e, s=s))
    h = 1e-3
    vals = [f(s0 + k * h) for k in (-2, -1, 0, 1, 2)]
    if max(abs(v) for v in vals) > 1e6:
        return
    d1 = (-vals[4] + 8 * vals[3] - 8 * vals[1] + vals[0]) / (12 * h)
    d2 = (-vals[4] + 16 * vals[3] - 30 * vals[2] + 16 * vals[1] - vals[0]) / (12 * h * h)
    got = ex.univariate(e, s0)
    scale = max(1.0, max(abs(v) for v in vals))
    assert abs(got[1] - d1) <= 1e-6 * scale
    assert abs(got[2] - d2) <= 1e-6 * scale


def _coeffs(J):
    if isinstance(J, Jet):
        return np.array([float(c) for c in J.coeffs])
    return np.array([float(J)] + [0.0] * 9)


@settings(max_examples=60, deadline=None)
@given(_safe(["x", "t"]), _safe(["x", "t"]), st.floats(-3, 3),
       st.floats(-1, 1), st.floats(-1, 1))
def test_evaluation_is_linear(a, b, lam, x0, t0):
    xs, ts = seeds(x0, t0)
    combo = ex.BinOp("+", a, ex.BinOp("*", ex.Num(abs(lam)), b))
    lhs = ex.eval_jet2(combo, xs, ts)
    ja, jb = ex.eval_jet2(a, xs, ts), ex.eval_jet2(b, xs, ts)
    rhs = ja + abs(lam) * jb
    lhs_c, rhs_c = _coeffs(lhs), _coeffs(rhs)
    scale = max(1.0, float(np.max(np.abs(rhs_c))))
    assert np.max(np.abs(lhs_c - rhs_c)) <= 1e-12 * scale
