import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from pointcontact.contact import CoupledSystem
from pointcontact.continuation import geometric_grid, track_branch
from pointcontact.errors import (DimensionMismatch, NotEigenvalue, NotResolventPoint,
                                 NotSimple, OutOfInterval)
from pointcontact.perturbation import (ExpansionResult, check_hypotheses, coeff_a,
                                       coeff_ab_scalar, evaluate_expansion, expansion)
from pointcontact.weyl import detfun, make_point_interaction, make_scalar_rational


def closed_form_d1(alpha, beta, e):
    """Closed-form coefficients for two scalar point interactions, E = q̂ - q̃."""
    r = math.sqrt(beta**2 - e)
    a = 2 * beta / (r + alpha)
    b = (beta**2 + e - alpha * r) / ((r + alpha) ** 3 * r)
    return a, b


def test_toy_coefficients(toy):
    res = coeff_ab_scalar(toy, 1.0)
    assert (res.lambda0, res.a, res.b, res.order) == (1.0, 1.0, -1.0, 2)
    assert coeff_a(toy, 1.0).a == 1.0


def test_contact_d1_coefficients(contact_d1):
    res = coeff_ab_scalar(contact_d1, -4.0)
    assert res.a == pytest.approx(-4, rel=1e-14)
    assert res.b == pytest.approx(3, rel=1e-14)
    assert (res.a, res.b) == pytest.approx(closed_form_d1(-1.0, -2.0, 0.0), rel=1e-14)
    assert res.diagnostics["dhat_beta_prime"] == pytest.approx(-0.25)
    assert res.diagnostics["dtilde_alpha"] == pytest.approx(1.0)


def test_contact_d2_coefficient(contact_d2):
    res = coeff_a(contact_d2, -4.0)
    assert res.a == pytest.approx(-4, rel=1e-14)
    assert res.order == 1 and res.b is None
    assert res.a < 0


def test_vanishing_second_derivative():
    # M̂ = λ has M̂'' = 0, so b = a² M̃'(λ0) / (α - M̃(λ0))
    tilde = make_scalar_rational([-1], [0, 1], (0, math.inf))
    hat = make_scalar_rational([0, 1], interval=(0, math.inf))
    sys = CoupledSystem.build(tilde, hat, alpha=0.5, beta=2.0)
    res = coeff_ab_scalar(sys, 2.0)
    mt, mt1 = -0.5, 0.25
    assert res.a == pytest.approx(1 / (mt - 0.5))
    assert res.b == pytest.approx(res.a**2 * mt1 / (0.5 - mt))


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, -0.2), st.floats(-3, -0.2), st.floats(-2, 2), st.floats(-2, 2))
def test_closed_form_point_interaction_d1(alpha, beta, q_tilde, q_hat):
    lam0 = q_hat - beta**2
    assume(lam0 < q_tilde - 0.05)                 # below the tilde threshold
    assume(abs(q_tilde - alpha**2 - lam0) > 0.05)  # resolvent point of the tilde side
    sys = CoupledSystem.build(make_point_interaction([q_tilde]),
                              make_point_interaction([q_hat]), alpha, beta)
    res = coeff_ab_scalar(sys, lam0)
    a, b = closed_form_d1(alpha, beta, q_hat - q_tilde)
    assert res.a == pytest.approx(a, rel=1e-10)
    assert res.b == pytest.approx(b, rel=1e-9, abs=1e-12)
    assert coeff_a(sys, lam0).a == pytest.approx(res.a, rel=1e-12, abs=1e-12)


def test_jacobi_cross_check_of_denominator(contact_d2):
    sys, lam0 = contact_d2, -4.0
    eye = np.eye(2)
    from pointcontact import matrix_core as mc
    den = mc.trace(mc.adjugate(sys.beta * eye - sys.hat.eval(lam0)) @ sys.hat.deriv1(lam0)).real
    probe = detfun(sys.hat, sys.beta)
    h = 1e-5
    fd = (probe.detfun(lam0 + h) - probe.detfun(lam0 - h)) / (2 * h)
    assert abs(den + fd) <= 1e-6 * abs(fd)


def test_role_interchange(contact_d1):
    # -1 = q̃ - α² is an eigenvalue of the tilde side; swap and expand there
    sw = contact_d1.swapped()
    res = expansion(sw, -1.0)
    xs = geometric_grid()
    trace = track_branch(contact_d1, -1.0, xs, check=False)
    rem = np.abs(trace.lambdas - (res.lambda0 + res.a * xs))
    slope = np.polyfit(np.log(xs[:9]), np.log(rem[:9]), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)
    # closed form with the roles exchanged
    a, b = closed_form_d1(contact_d1.beta, contact_d1.alpha, 0.0)
    assert (res.a, res.b) == pytest.approx((a, b), rel=1e-12)


def test_hypothesis_errors():
    pi = make_point_interaction
    with pytest.raises(NotEigenvalue):
        coeff_a(CoupledSystem.build(pi([0.0]), pi([0.0]), -1, -2), -3.0)
    with pytest.raises(NotResolventPoint):
        coeff_a(CoupledSystem.build(pi([0.0]), pi([0.0]), -2, -2), -4.0)
    cubic = make_scalar_rational([0, 0, 0, 1], interval=(-1, 1))
    with pytest.raises(NotSimple):
        coeff_a(CoupledSystem.build(make_scalar_rational([0, 1]), cubic, 1.0, 0.0), 0.0)
    with pytest.raises(OutOfInterval):
        coeff_a(CoupledSystem.build(pi([0.0]), pi([0.0]), -1, -2), 1.0)
    with pytest.raises(DimensionMismatch):
        coeff_ab_scalar(CoupledSystem.build(pi([0, 0]), pi([0, 5]), -1, -2), -4.0)


def test_check_hypotheses_reports_certificates(contact_d2):
    diag = check_hypotheses(contact_d2, -4.0)
    assert diag["dhat_beta"] == 0
    assert diag["dhat_beta_prime"] == pytest.approx(-0.25)
    assert diag["dtilde_alpha"] == pytest.approx(1.0)


def test_evaluate_expansion_examples():
    assert evaluate_expansion(ExpansionResult(-4.0, -4.0, 3.0, 2), 0.0) == -4.0
    assert evaluate_expansion(ExpansionResult(1.0, 1.0, -1.0, 2), 0.01) == pytest.approx(1.0099)
    assert evaluate_expansion(ExpansionResult(-4.0, -4.0), 0.1) == pytest.approx(-4.4)
    np.testing.assert_allclose(ExpansionResult(0.0, 2.0)(np.array([0.0, 1.0])), [0.0, 2.0])


def test_expansion_result_invariants():
    with pytest.raises(ValueError):
        ExpansionResult(0.0, 1.0, None, 2)
    with pytest.raises(ValueError):
        ExpansionResult(0.0, 1.0, 1.0, 1)
    res = ExpansionResult(0.0, 1.0, 2.0, 2)
    assert res.truncated(1) == ExpansionResult(0.0, 1.0)
