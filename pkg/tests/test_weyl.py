import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pointcontact import matrix_core as mc
from pointcontact.errors import (NoSignChange, NotEigenvalue, NotHerglotz, NotSimple,
                                 OutOfInterval)
from pointcontact.weyl import (check_herglotz, check_hermitian, detfun,
                               find_isolated_eigenvalue, make_point_interaction,
                               make_scalar_rational, make_tabulated)

from conftest import random_hermitian


def test_point_interaction_examples():
    m = make_point_interaction([[4.0]])
    np.testing.assert_allclose(m.eval(0.0), [[-2]])
    np.testing.assert_allclose(m.deriv1(0.0), [[0.25]])
    m = make_point_interaction([[0.0]])
    np.testing.assert_allclose(m.deriv2(-4.0), [[1 / 32]])
    m = make_point_interaction(np.diag([0.0, 5.0]))
    np.testing.assert_allclose(m.eval(-4.0), np.diag([-2, -3]))
    assert m.valid_interval == (-math.inf, 0.0)


def test_point_interaction_bound_state_values():
    # for d = 1: M̃(λ0) = -sqrt(β² - E), M̃' = 1/(2 sqrt(β² - E)),
    # M̂'(λ0) = 1/(2|β|), M̂''(λ0) = 1/(4|β|³) at λ0 = q̂ - β², E = q̂ - q̃
    q_tilde, q_hat, beta = 0.3, 1.1, -1.7
    e = q_hat - q_tilde
    lam0 = q_hat - beta**2
    tilde, hat = make_point_interaction([q_tilde]), make_point_interaction([q_hat])
    root = math.sqrt(beta**2 - e)
    assert tilde.eval(lam0)[0, 0] == pytest.approx(-root, rel=1e-14)
    assert tilde.deriv1(lam0)[0, 0] == pytest.approx(1 / (2 * root), rel=1e-14)
    assert hat.eval(lam0)[0, 0] == pytest.approx(beta, rel=1e-14)
    assert hat.deriv1(lam0)[0, 0] == pytest.approx(1 / (2 * abs(beta)), rel=1e-14)
    assert hat.deriv2(lam0)[0, 0] == pytest.approx(1 / (4 * abs(beta) ** 3), rel=1e-14)


def test_refuses_evaluation_outside_interval():
    m = make_point_interaction([0.0])
    for lam in (0.0, 1.0):
        with pytest.raises(OutOfInterval):
            m.eval(lam)


def test_scalar_rational_examples():
    m = make_scalar_rational([0, 1])
    assert m.eval(3)[0, 0] == 3
    assert m.deriv1(3)[0, 0] == 1
    assert m.deriv2(3)[0, 0] == 0
    m = make_scalar_rational([-1], [0, 1], (0, math.inf))
    assert m.deriv1(2)[0, 0] == pytest.approx(0.25)
    assert m.deriv2(2)[0, 0] == pytest.approx(-2 / 8)
    m = make_scalar_rational([0, 0, 0, 1], interval=(-1, 1))
    assert m.eval(0.5)[0, 0] == pytest.approx(0.125)


def test_scalar_rational_rejects_decreasing():
    with pytest.raises(NotHerglotz):
        make_scalar_rational([0, -1])
    with pytest.raises(NotHerglotz):
        make_scalar_rational([1], [0, 1], (0, math.inf))  # 1/λ decreases


def test_scalar_rational_rejects_pole_inside():
    with pytest.raises(ValueError):
        make_scalar_rational([-1], [0, 1], (-1, 1))


def test_rational_derivatives_against_richardson():
    m = make_scalar_rational([1, 2, 0, 1], [3, 0, 1], (-5, 5))  # no real poles
    for lam in (-2.0, 0.1, 1.7):
        f = lambda t: m.eval(t)[0, 0]
        assert m.deriv1(lam)[0, 0] == pytest.approx(mc.richardson_deriv1(f, lam, 1e-3), abs=1e-9)
        assert m.deriv2(lam)[0, 0] == pytest.approx(mc.richardson_deriv2(f, lam, 1e-3), abs=1e-7)


def test_tabulated_model_uses_finite_differences():
    exact = make_point_interaction(np.diag([0.0, 2.0]))
    tab = make_tabulated(exact.eval, 2, exact.valid_interval)
    assert not tab.analytic and exact.analytic
    for lam in (-3.0, -0.7):
        assert mc.allclose(tab.deriv1(lam), exact.deriv1(lam), 1e-9)
        assert mc.allclose(tab.deriv2(lam), exact.deriv2(lam), 1e-7)


def test_detfun_examples():
    assert detfun(make_scalar_rational([0, 1]), 1.0).detfun(1.0) == 0
    assert detfun(make_point_interaction([0.0]), -2.0).detfun(-4.0) == 0
    probe = detfun(make_point_interaction([0.0, 5.0]), -2.0)
    assert probe.detfun_deriv(-4.0) == pytest.approx(-0.25, rel=1e-14)
    h = 1e-5
    fd = (probe.detfun(-4 + h) - probe.detfun(-4 - h)) / (2 * h)
    assert fd == pytest.approx(-0.25, rel=1e-8)


def test_find_isolated_eigenvalue_examples():
    assert find_isolated_eigenvalue(detfun(make_scalar_rational([0, 1]), 1.0),
                                    (0, 2)) == pytest.approx(1.0, abs=1e-14)
    assert find_isolated_eigenvalue(detfun(make_point_interaction([0.0]), -2.0),
                                    (-5, -3)) == -4.0
    assert find_isolated_eigenvalue(detfun(make_point_interaction([0.0, 5.0]), -2.0),
                                    (-5, -3)) == pytest.approx(-4.0, abs=1e-14)


def test_find_isolated_eigenvalue_errors():
    probe = detfun(make_point_interaction([0.0]), -2.0)
    with pytest.raises(NoSignChange):
        find_isolated_eigenvalue(probe, (-3, -1))
    with pytest.raises(NotEigenvalue):
        find_isolated_eigenvalue(probe, lambda0=-3.0)
    cubic = detfun(make_scalar_rational([0, 0, 0, 1], interval=(-1, 1)), 0.0)
    with pytest.raises(NotSimple):
        find_isolated_eigenvalue(cubic, (-0.5, 0.7))


def test_herglotz_and_hermiticity_of_point_interaction():
    rng = np.random.default_rng(11)
    for d in (1, 2, 3, 4):
        m = make_point_interaction(random_hermitian(rng, d))
        assert check_hermitian(m) <= 1e-9
        assert check_herglotz(m) >= 0
        grid = np.linspace(m.valid_interval[1] - 10, m.valid_interval[1] - 0.01, 30)
        assert min(mc.trace(m.deriv1(lam)).real for lam in grid) >= -1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_analytic_derivatives_match_richardson(d, seed):
    rng = np.random.default_rng(seed)
    m = make_point_interaction(random_hermitian(rng, d))
    top = m.valid_interval[1]
    for lam in top - rng.uniform(0.2, 5.0, size=3):
        assert mc.allclose(m.deriv1(lam), mc.richardson_deriv1(m.eval, lam, 1e-3), 1e-7)
        assert mc.allclose(m.deriv2(lam), mc.richardson_deriv2(m.eval, lam, 1e-3), 1e-7)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31))
def test_jacobi_consistency(d, seed):
    rng = np.random.default_rng(seed)
    m = make_point_interaction(random_hermitian(rng, d))
    probe = detfun(m, rng.uniform(-3, 1))
    top = m.valid_interval[1]
    h = 1e-5
    for lam in top - rng.uniform(0.2, 6.0, size=20):
        analytic = probe.detfun_deriv(lam)
        fd = (probe.detfun(lam + h) - probe.detfun(lam - h)) / (2 * h)
        scale = max(abs(analytic), 1e-6 * probe.scale(lam))
        assert abs(fd - analytic) <= 1e-6 * scale
