"""Following one solution through the mapping catalog.

Start from V(xi, eta) = F(xi) + G(eta), pull it back to the c = x^2 equation,
then push it through the nonlocal maps N1 and N2 into the time-dependent
speeds c = x^2 T^(-4/3) and c = x^2 T^(-2/3).

    python demos/02_mapping_chain.py
"""

from varwave import mappings as mp
from varwave import solutions as sol
from varwave import speeds as sp
from varwave import verify as vf
from varwave.jets import seeds

pair = sol.SolutionPair.from_text("sin(s)", "tanh(0.5*s)")

for m in mp.catalog():
    print(f"{m.id:<5} {m.describe()['formula']}")

# characteristic form -> c = x^2 through the inverse of Q
V = sol.dalembert(pair, None)
u = mp.transport(mp.get("Q"), V)
direct = sol.general_solution_quadratic(pair, None)
x, t = seeds(1.3, 0.4)
print(f"\npulled back via Q: {u(x, t).f:.15f}")
print(f"closed form:       {direct(x, t).f:.15f}")

# c = x^2 -> time-dependent speeds; the pushed-forward B satisfies the new equation
for nid in ("N1", "N2"):
    n = mp.get(nid)
    B = mp.push_forward_nonlocal(n, direct)
    target = sp.transformed_speed(direct.speed, nid)
    r = vf.residual_grid(B, target, vf.equivalence_grid(n, 32))
    rel = mp.check_integral_relation(n, direct, B, (1.3, 2.0))
    print(f"\n{nid}: kappa = {n.kappa:.6g}, max residual of B {r.max_residual:.2e}, "
          f"integral relation defect at (1.3, 2) {rel:.2e}")

# the point maps are invertible, the nonlocal ones are not
print(f"\nQ round trip worst deviation: {vf.check_roundtrip(mp.get('Q')).worst_deviation:.2e}")
try:
    mp.invert(mp.get("N1"))
except Exception as exc:
    print(f"invert(N1): {type(exc).__name__}: {exc}")
