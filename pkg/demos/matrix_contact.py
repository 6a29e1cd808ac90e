"""
Two-channel contact.

Here the hat potential is Q = diag(0, 5), so only the first channel binds at
λ0 = -4 when beta = -2. The first-order shift comes from the general
adjugate formula; no closed second-order coefficient is used for d > 1, so
the x**2 term is only estimated from the tracked branch.
"""
import numpy as np

from pointcontact import (CoupledSystem, adjugate, coeff_a, fit_coefficients,
                          geometric_grid, make_point_interaction, track_branch)

tilde = make_point_interaction([0.0, 0.0])
hat = make_point_interaction([0.0, 5.0])
sys = CoupledSystem.build(tilde, hat, alpha=-1.0, beta=-2.0)
lam0 = -4.0

# the pieces of the formula
eye = np.eye(2)
print("adj(beta I - M_hat) =\n", adjugate(sys.beta * eye - hat.eval(lam0)).real + 0.0)
print("M_hat' =\n", hat.deriv1(lam0).real)
print("M_tilde - alpha I =\n", (tilde.eval(lam0) - sys.alpha * eye).real)

res = coeff_a(sys, lam0)
print("a =", res.a, "(negative: the level moves down)")

trace = track_branch(sys, lam0, geometric_grid(), reference=res)
fit = fit_coefficients(trace, 1, res)
print("fitted a =", fit.a_hat)
print("remainder slope:", round(fit.remainder_slope, 3))
print("empirical x**2 coefficient:", fit.higher_hat)
