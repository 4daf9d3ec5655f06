import numpy as np
import pytest

from varwave import fdsolve as fd
from varwave import solutions as sol
from varwave import speeds as sp
from varwave.errors import CFLError, InstabilityError
from varwave.verify import fd_cases


def test_zero_data_stays_zero():
    f = fd.leapfrog_solve(sp.QuadraticX(), np.zeros(33), np.zeros(33), lambda t: (0.0, 0.0),
                          fd.Grid1D(1.0, 2.0, 32), 0.3)
    assert np.all(f.values == 0.0)
    assert f.metadata["scheme"] == "leapfrog"
    assert f.metadata["courant"] <= 0.9 + 1e-12


def test_constant_speed_travelling_sine():
    def run(n):
        g = fd.Grid1D(0.0, 1.0, n)
        x = g.x
        f = fd.leapfrog_solve(sp.Profile("1"), np.sin(np.pi * x), -np.pi * np.cos(np.pi * x),
                              lambda t: (np.sin(-np.pi * t), np.sin(np.pi * (1 - t))), g, 0.5)
        return g.h, np.max(np.abs(f.final - np.sin(np.pi * (x - 0.5))))

    errs = [run(n) for n in (40, 80, 160)]
    assert 1.8 <= fd.convergence_order(errs) <= 2.2


def test_quadratic_sin_cos_quarter_rate():
    u = sol.general_solution_quadratic("sin(s)", "cos(s)")
    errs = [fd.manufactured(u, u.speed, fd.Grid1D(1.0, 2.0, n), 0.0, 0.3)[1] for n in (20, 40, 80)]
    assert 3.4 <= errs[0] / errs[1] <= 4.6
    assert 3.4 <= errs[1] / errs[2] <= 4.6


@pytest.mark.parametrize("key", sorted(fd.FD_BOXES))
def test_family_convergence(key):
    u, speed = fd_cases()[key]
    study = fd.convergence_study(u, speed, *fd.FD_BOXES[key])
    assert 1.8 <= study["order"] <= 2.2
    assert study["rows"][-1]["max_error"] < 1e-3


def test_halving_cfl_changes_little():
    u = sol.general_solution_quadratic("sin(s)", "cos(s)")
    g = fd.Grid1D(1.0, 2.0, 40)
    f1, e1, _ = fd.manufactured(u, u.speed, g, 0.0, 0.3, cfl=0.9)
    f2, e2, _ = fd.manufactured(u, u.speed, g, 0.0, 0.3, cfl=0.45)
    assert np.max(np.abs(f1.final - f2.final)) <= 2 * max(e1, e2)


def test_convergence_order_exact():
    hs = [0.1, 0.05, 0.025]
    assert fd.convergence_order([(h, h * h) for h in hs]) == pytest.approx(2.0)
    assert fd.convergence_order([(h, h) for h in hs]) == pytest.approx(1.0)


@pytest.mark.parametrize("errors", [[(0.1, 0.01), (0.05, 0.0025)], [(0.1, 1), (0.04, 1), (0.02, 1)]])
def test_convergence_order_rejects(errors):
    with pytest.raises(ValueError):
        fd.convergence_order(errors)


@pytest.mark.parametrize("cfl", [0.0, -0.5, 1.5])
def test_cfl_bounds(cfl):
    with pytest.raises(CFLError):
        fd.leapfrog_solve(sp.Profile("1"), np.zeros(9), np.zeros(9), lambda t: (0, 0),
                          fd.Grid1D(0, 1, 8), 0.1, cfl=cfl)


def test_instability_reported():
    bad = lambda t: (np.inf, 0.0)
    with pytest.raises(InstabilityError) as info:
        fd.leapfrog_solve(sp.Profile("1"), np.zeros(9), np.zeros(9), bad, fd.Grid1D(0, 1, 8), 1.0)
    assert info.value.level >= 2


@pytest.mark.parametrize("a,b,n", [(1.0, 1.0, 10), (2.0, 1.0, 10), (0.0, 1.0, 7)])
def test_grid_invariants(a, b, n):
    with pytest.raises(ValueError):
        fd.Grid1D(a, b, n)


def test_time_step_hits_end():
    g = fd.Grid1D(1.0, 2.0, 16)
    f = fd.leapfrog_solve(sp.QuadraticX(), np.ones(17), np.zeros(17), lambda t: (1.0, 1.0), g, 0.37)
    assert f.times[-1] == pytest.approx(0.37, abs=1e-15)
    assert f.dt * f.metadata["max_speed"] / g.h <= 0.9 + 1e-12
    np.testing.assert_allclose(f.final, 1.0, atol=1e-13)
