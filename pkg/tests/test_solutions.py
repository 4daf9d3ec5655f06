import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varwave import mappings as mp
from varwave import solutions as sol
from varwave import speeds as sp
from varwave.errors import ValidityError
from varwave.jets import seeds
from varwave.verify import fd_residual, residual


def test_dalembert_zero():
    V = sol.dalembert("0", "0")
    assert V.values(0.3, -0.2) == 0.0


def test_dalembert_linear():
    V = sol.dalembert("s", "-s")
    J = V(*seeds(0.7, 0.2))
    assert J.f == pytest.approx(0.5) and J.f_xt == 0.0


def test_dalembert_mixed_partial_vanishes():
    V = sol.dalembert("sin(s)", "exp(s)")
    rng = np.random.default_rng(1)
    xi, eta = rng.uniform(-2, 2, 50), rng.uniform(-2, 2, 50)
    assert np.max(np.abs(V(*seeds(xi, eta)).f_xt)) <= 1e-12


@pytest.mark.parametrize("F,G,expect", [("s/2", "s/2", "one"), ("s/2", "-s/2", "xt")])
def test_quadratic_simple(F, G, expect):
    u = sol.general_solution_quadratic(F, G)
    x, t = 1.7, 0.4
    want = 1.0 if expect == "one" else x * t
    assert u.values(x, t) == pytest.approx(want, rel=1e-15)


def test_delta_zero_simple():
    u = sol.general_solution_delta("s/2", "s/2", 0.0)
    J = u(*seeds(1.3, 0.8))
    assert J.f == pytest.approx(0.8, rel=1e-15)
    assert abs(J.f_tt) < 1e-13 and abs(J.f_xx) < 1e-13
    assert sol.general_solution_delta("0", "0", 0.0).values(1.3, 0.8) == 0.0


@pytest.mark.parametrize("build", [sol.general_solution_N1, sol.general_solution_N2])
def test_linear_pair_collapses(build):
    B = build("s", "-s")
    assert B.values(1.3, 2.0) == pytest.approx(0.0, abs=1e-14)
    assert build("0", "0").values(1.3, 2.0) == 0.0


# Values at the probe points from symbolic differentiation (independent of the jets):
# (u, second derivative in the first coordinate, second derivative in the second).
FROZEN = [
    ("QUAD17", lambda: sol.general_solution_quadratic("sin(s)", "cos(s)"), (1.5, 0.8),
     (2.9785615139538537, -0.5883578299168106, -2.9785615139538537)),
    ("DELTA+1", lambda: sol.general_solution_delta("tanh(s)", "sin(s)", 1.0), (2.0, 3.0),
     (-4.804718562935089, 1.1678721501349318, 0.1642320211127248)),
    ("DELTA-1", lambda: sol.general_solution_delta("sin(s)", "exp(s)", -1.0), (0.5, 0.5),
     (3.159578931881754, 4.044261032808645, 4.044261032808645)),
    ("N1GEN", lambda: sol.general_solution_N1("sin(s)", "cos(s)"), (0.9, 27.0),
     (54.79415836381091, -83.51494949521552, -0.008351494949521553)),
    ("N2GEN", lambda: sol.general_solution_N2("exp(s)", "tanh(s)"), (1.1, 0.5),
     (-41.27996289501925, -26.629272360265297, -98.24339630951805)),
]


@pytest.mark.parametrize("tag,build,point,values", FROZEN, ids=[f[0] for f in FROZEN])
def test_frozen_values(tag, build, point, values):
    J = build()(*seeds(*point))
    assert J.f == pytest.approx(values[0], rel=1e-13)
    assert J.partial(2, 0) == pytest.approx(values[1], rel=1e-11)
    assert J.partial(0, 2) == pytest.approx(values[2], rel=1e-11)


@pytest.mark.parametrize("tag,build,point,values", FROZEN, ids=[f[0] for f in FROZEN])
def test_residual_jet_and_differences(tag, build, point, values):
    s = build()
    assert abs(residual(s, s.speed, point)) <= 1e-9
    # h=1e-3 balances truncation against roundoff where c is small
    assert abs(fd_residual(s, s.speed, point, h=1e-3)) <= 1e-5


def test_delta_singular_line():
    u = sol.general_solution_delta("sin(s)", "cos(s)", 1.0)
    with pytest.raises(ValidityError):
        u.values(1.0, 2.0)
    with pytest.raises(ValidityError):
        sol.general_solution_quadratic("sin(s)", "cos(s)").values(0.0, 1.0)


@pytest.mark.parametrize("components,point", [(("inner", "inner"), (0.3, -0.5)), (("below", "above"), (-2.0, 1.5))])
def test_delta_other_components(components, point):
    u = sol.general_solution_delta("sin(s)", "cos(s)", 1.0, components)
    assert abs(residual(u, sp.DeltaFamily(1.0, u.region), point)) <= 1e-10


def test_quadratic_equals_q_pullback():
    pair = sol.SolutionPair.from_text("sin(s)", "exp(0.4*s)")
    u = sol.general_solution_quadratic(pair, None)
    pulled = mp.transport(mp.get("Q"), sol.dalembert(pair, None))
    X, T = np.meshgrid(np.linspace(0.5, 2, 9), np.linspace(-1, 1, 9), indexing="ij")
    a, b = u(*seeds(X, T)).f, pulled(*seeds(X, T)).f
    np.testing.assert_allclose(b, a, rtol=1e-11)


BUILDERS = {
    "CONST15": (lambda p: sol.dalembert(p, None), (-1.5, 1.5), (-1.5, 1.5)),
    "QUAD17": (lambda p: sol.general_solution_quadratic(p, None), (0.5, 2.0), (-1.0, 1.0)),
    "DELTA0": (lambda p: sol.general_solution_delta(p, None, 0.0), (0.5, 2.0), (0.5, 2.0)),
    "DELTA+1": (lambda p: sol.general_solution_delta(p, None, 1.0), (1.2, 3.0), (1.2, 3.0)),
    "DELTA-1": (lambda p: sol.general_solution_delta(p, None, -1.0), (-2.0, 2.0), (-2.0, 2.0)),
    "N1GEN": (lambda p: sol.general_solution_N1(p, None), (0.5, 2.0), (0.1, 100.0)),
    "N2GEN": (lambda p: sol.general_solution_N2(p, None), (0.5, 2.0), (0.01, 10.0)),
}


@pytest.mark.parametrize("tag", sorted(BUILDERS))
def test_residual_zero_on_pool(tag):
    build, (a0, a1), (b0, b1) = BUILDERS[tag]
    rng = np.random.default_rng(11)
    for pair in sol.standard_pairs(20, seed=5):
        s = build(pair)
        a, b = rng.uniform(a0, a1, 50), rng.uniform(b0, b1, 50)
        for p in zip(a, b):
            assert abs(residual(s, s.speed, p)) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(BUILDERS)), st.floats(-2, 2), st.integers(0, 1000))
def test_superposition(tag, lam, seed):
    build, (a0, a1), (b0, b1) = BUILDERS[tag]
    p1, p2 = sol.standard_pairs(2, seed)
    s1, s2, s12 = build(p1), build(p2), build(p1.combine(p2, lam))
    a, b = 0.5 * (a0 + a1) + 0.1, 0.5 * (b0 + b1) - 0.05
    xs, ts = seeds(a, b)
    want = s1(xs, ts).f + lam * s2(xs, ts).f
    scale = max(1.0, abs(s1(xs, ts).f), abs(s2(xs, ts).f))
    assert abs(s12(xs, ts).f - want) <= 1e-12 * scale


def test_pool_reproducible():
    a = [p.texts() for p in sol.standard_pairs(10, seed=3)]
    b = [p.texts() for p in sol.standard_pairs(10, seed=3)]
    assert a == b
    assert a != [p.texts() for p in sol.standard_pairs(10, seed=4)]


def test_build_dispatch():
    assert sol.build("quad17", "sin(s)", "cos(s)").tag == "QUAD17"
    assert sol.build("DELTA", "sin(s)", "cos(s)", delta=-1.0).params["delta"] == -1.0
    with pytest.raises(ValueError):
        sol.build("DELTA", "s", "s")
    with pytest.raises(ValueError):
        sol.build("nope", "s", "s")


def test_describe():
    d = sol.general_solution_delta("sin(s)", "cos(s)", 4.0).describe()
    assert d["family"] == "DELTA" and d["params"]["delta"] == 4.0
    assert d["validity"] == {"x": [2.0, None], "t": [2.0, None]}
