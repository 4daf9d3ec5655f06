"""Exact initial-value solution for c = x^2 compared with a leapfrog run.

Sampled data u(x, 0), u_t(x, 0) on [1, 4] determine F and G on an interval,
which fixes the solution inside a domain of determinacy.  A second-order
finite-difference run, fed the exact boundary values, converges to the same
answer.

    python demos/03_ivp_vs_leapfrog.py
"""

import numpy as np

from varwave import fdsolve as fd
from varwave import ivp
from varwave import solutions as sol
from varwave.jets import seeds

exact = sol.general_solution_quadratic("sin(s)", "cos(s)")

x = np.linspace(1.0, 4.0, 512)
J = exact(*seeds(x, np.zeros_like(x), order=1))
data = ivp.InitialData(x, J.f, J.f_t, 0.0)
rec = ivp.solve_ivp_quadratic(data)
print("determinacy:", rec.determinacy())

xq = np.linspace(1.2, 2.8, 9)
t_end = 0.1
ref = exact.values(xq, t_end)
print(f"\nIVP reconstruction at t = {t_end}: max error {np.max(np.abs(rec(xq, t_end) - ref)):.2e}")

print("\nleapfrog on [1.2, 2.8], exact boundary data:")
for n in (40, 80, 160):
    g = fd.Grid1D(1.2, 2.8, n)
    field, err, _ = fd.manufactured(exact, exact.speed, g, 0.0, t_end)
    print(f"  n = {n:>3}  h = {g.h:.4f}  max error {err:.2e}")

outside = (1.0, 0.2)
print(f"\n(x, t) = {outside} inside the determinacy domain? {bool(rec.in_domain(*outside))}")
