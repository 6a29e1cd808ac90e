"""
Weak coupling of two scalar point interactions.

Both sides are the same point interaction M(λ) = i sqrt(λ), Q = 0. With
boundary parameters alpha = -1 and beta = -2 the hat side has its bound
state at λ0 = -beta**2 = -4, and the tilde side has no spectrum there.
Switching on the contact pushes the level down like λ0 + a x + b x**2.
"""
import numpy as np

from pointcontact import (CoupledSystem, expansion, fit_coefficients, geometric_grid,
                          make_point_interaction, track_branch)
from pointcontact.weyl import detfun, find_isolated_eigenvalue

free = make_point_interaction([0.0])
sys = CoupledSystem.build(free, free, alpha=-1.0, beta=-2.0)

# locate the unperturbed level inside a bracket
lam0 = find_isolated_eigenvalue(detfun(sys.hat, sys.beta), bracket=(-5.0, -3.0))
res = expansion(sys, lam0)
print("lambda0 =", lam0)
print("a =", res.a, " b =", res.b)

# follow the true level numerically and compare
xs = geometric_grid(1e-6, 1e-3, per_decade=8)
trace = track_branch(sys, lam0, xs, reference=res)

# this model is solvable: (s - 1)(s - 2) = x with s = sqrt(-λ)
exact = -((3 + np.sqrt(1 + 4 * xs)) / 2) ** 2
print("max |numeric - exact| =", np.max(np.abs(trace.lambdas - exact)))

print(f"{'x':>10} {'numeric':>22} {'expansion':>22} {'diff':>10}")
for s in trace.samples[::4]:
    print(f"{s.x:10.3e} {s.lam:22.17f} {res(s.x):22.17f} {abs(s.lam - res(s.x)):10.2e}")

# the remainder after two terms should fall off like x**3
fit = fit_coefficients(trace, 2, res)
print("fitted a, b:", fit.a_hat, fit.b_hat)
print("remainder slope:", round(fit.remainder_slope, 3), "over", fit.slope_window)
