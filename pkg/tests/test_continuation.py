import math

import numpy as np
import pytest

from pointcontact.contact import CoupledSystem, char_fn
from pointcontact.continuation import (BranchSample, BranchTrace, fit_coefficients,
                                       geometric_grid, remainder_slope, solve_branch_point,
                                       track_branch)
from pointcontact.errors import ContinuationError, InsufficientSamples, NewtonDiverged
from pointcontact.perturbation import ExpansionResult, coeff_a, expansion
from pointcontact.weyl import make_point_interaction, make_scalar_rational

from conftest import exact_branch_d1, exact_branch_toy


def synthetic_trace(fn, xs, lambda0):
    return BranchTrace(tuple(BranchSample(x, fn(x), 0.0, 0, 1.0) for x in xs), lambda0)


def test_geometric_grid_default():
    g = geometric_grid()
    assert len(g) == 25
    assert g[0] == pytest.approx(1e-6) and g[-1] == pytest.approx(1e-3)
    assert np.all(np.diff(np.log10(g)) == pytest.approx(1 / 8))


def test_toy_single_point(toy):
    trace = track_branch(toy, 1.0, [0.01])
    assert trace.samples[0].lam == pytest.approx((1 + math.sqrt(1.04)) / 2, abs=1e-14)
    assert trace.samples[0].lam == pytest.approx(1.009902, abs=1e-6)
    assert trace.fitted is None


def test_d1_single_point(contact_d1):
    s = track_branch(contact_d1, -4.0, [1e-4]).samples[0]
    assert s.lam == pytest.approx(-4 - 4e-4 + 3e-8, abs=1e-11)
    assert s.lam == pytest.approx(exact_branch_d1(1e-4), abs=1e-14)
    assert s.residual <= 1e-12


def test_empty_grid(contact_d1):
    trace = track_branch(contact_d1, -4.0, [])
    assert len(trace) == 0 and trace.fitted is None


def test_matches_exact_roots(toy, contact_d1, contact_d2):
    xs = geometric_grid(1e-6, 1e-1, 4)
    np.testing.assert_allclose(track_branch(toy, 1.0, xs).lambdas, exact_branch_toy(xs),
                               atol=1e-14)
    np.testing.assert_allclose(track_branch(contact_d1, -4.0, xs).lambdas,
                               exact_branch_d1(xs), atol=1e-13)
    # diagonal potentials decouple; the branch lives in the first channel
    np.testing.assert_allclose(track_branch(contact_d2, -4.0, xs).lambdas,
                               exact_branch_d1(xs), atol=1e-13)


def test_fit_perfect_quadratic():
    xs = geometric_grid()
    trace = synthetic_trace(lambda x: 1 + x - x * x, xs, 1.0)
    fit = fit_coefficients(trace, 2)
    assert fit.a_hat == pytest.approx(1, abs=1e-10)
    assert fit.b_hat == pytest.approx(-1, abs=1e-6)
    fit1 = fit_coefficients(trace, 1)
    assert fit1.b_hat is None
    assert fit1.a_hat == pytest.approx(1, abs=1e-10)
    assert fit1.higher_hat == pytest.approx(-1, abs=1e-6)


def test_fit_insufficient_samples():
    with pytest.raises(InsufficientSamples):
        fit_coefficients(synthetic_trace(lambda x: x, [1e-4, 2e-4, 3e-4, 4e-4], 0.0), 1)
    with pytest.raises(InsufficientSamples):
        fit_coefficients(synthetic_trace(lambda x: x, [1e-6, 1e-5, 1e-4], 0.0), 1)


def test_remainder_slope_of_power_law():
    xs = geometric_grid()
    slope, window = remainder_slope(xs, 5 * xs**3, 1.0)
    assert slope == pytest.approx(3, abs=1e-10)
    # 5 x³ is above 256 ulps of 1 only from x ~ 2.3e-5 on
    assert 2e-5 < window[0] < 4e-5
    slope, window = remainder_slope(xs, np.full_like(xs, 1e-17), 1.0)
    assert math.isnan(slope) and window is None
    with pytest.raises(InsufficientSamples):
        remainder_slope(xs, np.where(xs > 6e-4, 1.0, 0.0), 1.0)


def test_contact_d1_fit(contact_d1):
    res = expansion(contact_d1, -4.0)
    trace = track_branch(contact_d1, -4.0, geometric_grid(), reference=res)
    fit = trace.fitted
    assert fit.order == 2
    assert abs(fit.a_hat + 4) <= 1e-4
    assert abs(fit.b_hat - 3) <= 1e-2
    assert fit.remainder_slope >= 2.8


def test_contact_d2_fit(contact_d2):
    res = coeff_a(contact_d2, -4.0)
    trace = track_branch(contact_d2, -4.0, geometric_grid(), reference=res)
    fit = trace.fitted
    assert fit.order == 1 and fit.b_hat is None
    assert abs(fit.a_hat + 4) <= 1e-4
    assert fit.remainder_slope >= 1.8
    # empirical (non-analytic) second-order coefficient of the decoupled channel
    assert fit.higher_hat == pytest.approx(3, abs=1e-2)


@pytest.mark.parametrize("order", [1, 2])
def test_residual_decay(order, toy):
    res = expansion(toy, 1.0)
    trace = track_branch(toy, 1.0, geometric_grid(), reference=res)
    assert fit_coefficients(trace, order, res).remainder_slope >= order + 0.8


def test_determinism(contact_d2):
    xs = geometric_grid()
    t1 = track_branch(contact_d2, -4.0, xs)
    t2 = track_branch(contact_d2, -4.0, xs)
    assert t1 == t2


def test_invalid_grids(toy):
    with pytest.raises(ValueError):
        track_branch(toy, 1.0, [1e-3, 1e-4])
    with pytest.raises(ValueError):
        track_branch(toy, 1.0, [-1e-3])


def test_newton_budget_exhausted(toy):
    with pytest.raises(NewtonDiverged) as info:
        solve_branch_point(toy, 0.3, 1.0, max_iter=1)
    assert info.value.last_iterate is not None


def test_branch_cannot_leave_interval():
    # hat = λ on (0.5, 1.05): the root λ(x) = (1 + sqrt(1 + 4x))/2 exits at x ~ 0.0525
    sys = CoupledSystem.build(make_scalar_rational([0, 1], interval=(0.5, 1.05)),
                              make_scalar_rational([0, 1], interval=(0.5, 1.05)), 0.0, 1.0)
    with pytest.raises(ContinuationError):
        track_branch(sys, 1.0, [0.01, 0.03, 0.2])


def test_samples_solve_characteristic_function(contact_d2):
    trace = track_branch(contact_d2, -4.0, [1e-3, 1e-2])
    for s in trace.samples:
        assert abs(char_fn(contact_d2, s.lam, s.x)) <= 1e-12
        assert abs(s.f_lambda) >= 1e-8
