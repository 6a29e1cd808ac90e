r"""Matrix Weyl functions on a real interval of the resolvent set.

A :class:`WeylModel` bundles :math:`M(\lambda)` with its first two
derivatives. Three constructors are provided:

* :func:`make_point_interaction` -- the point interaction in three dimensions
  with matrix potential ``Q``, :math:`M(\lambda) = i\sqrt{\lambda - Q}`, with
  analytic derivatives;
* :func:`make_scalar_rational` -- a scalar rational Herglotz function
  ``p(λ)/q(λ)``, differentiated exactly as a rational function;
* :func:`make_tabulated` -- any user evaluator; derivatives fall back to
  Richardson-extrapolated central differences.

:class:`ExtensionSpectrumProbe` evaluates :math:`\det(pI - M(\lambda))`, whose
zeros are the eigenvalues of the extension with boundary parameter ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from . import matrix_core as mc
from .errors import (NoSignChange, NonRealDeterminant, NotEigenvalue,
                     NotHerglotz, NotSimple, OutOfInterval)

__all__ = [
    "WeylModel",
    "ExtensionSpectrumProbe",
    "make_point_interaction",
    "make_scalar_rational",
    "make_tabulated",
    "detfun",
    "find_isolated_eigenvalue",
    "check_herglotz",
    "check_hermitian",
    "probe_grid",
    "real_part",
    "ROOT_TOL",
    "SIMPLE_TOL",
    "FD_STEP",
]

ROOT_TOL = 1e-12
SIMPLE_TOL = 1e-8
FD_STEP = 1e-3
REAL_TOL = 1e-9


def real_part(z: complex, scale: float = 1.0, tol: float = REAL_TOL,
              what: str = "value") -> float:
    """Return ``z.real`` after checking ``|z.imag| <= tol * max(1, scale)``."""
    z = complex(z)
    if abs(z.imag) > tol * max(1.0, scale):
        raise NonRealDeterminant(
            f"{what} has imaginary part {z.imag:.3e} (real part {z.real:.3e})")
    return z.real


@dataclass(frozen=True)
class WeylModel:
    """A matrix Weyl function with derivative stack on `valid_interval`.

    `valid_interval` is an open interval ``(lo, hi)`` that the caller asserts
    to lie in the resolvent set of the distinguished extension; endpoints may
    be infinite. Evaluation outside it raises :class:`OutOfInterval`.
    """

    dim: int
    kind: str
    valid_interval: tuple[float, float]
    _eval: Callable = field(repr=False)
    _deriv1: Callable | None = field(default=None, repr=False)
    _deriv2: Callable | None = field(default=None, repr=False)
    params: dict = field(default_factory=dict, repr=False, compare=False)
    fd_step: float = FD_STEP

    def contains(self, lam: float) -> bool:
        lo, hi = self.valid_interval
        return lo < lam < hi

    def _check(self, lam):
        if not self.contains(lam):
            raise OutOfInterval(
                f"lambda={lam!r} outside valid interval {self.valid_interval}")

    def _step(self, lam):
        lo, hi = self.valid_interval
        h = self.fd_step * max(1.0, abs(lam))
        return min(h, 0.5 * (lam - lo), 0.5 * (hi - lam))

    def eval(self, lam: float) -> np.ndarray:
        self._check(lam)
        return mc.as_matrix(self._eval(lam))

    def deriv1(self, lam: float) -> np.ndarray:
        self._check(lam)
        if self._deriv1 is not None:
            return mc.as_matrix(self._deriv1(lam))
        return mc.as_matrix(mc.richardson_deriv1(self._eval, lam, self._step(lam)))

    def deriv2(self, lam: float) -> np.ndarray:
        self._check(lam)
        if self._deriv2 is not None:
            return mc.as_matrix(self._deriv2(lam))
        return mc.as_matrix(mc.richardson_deriv2(self._eval, lam, self._step(lam)))

    @property
    def analytic(self) -> bool:
        return self._deriv1 is not None and self._deriv2 is not None


def make_point_interaction(q) -> WeylModel:
    r"""Weyl function :math:`M(\lambda) = i\sqrt{\lambda - Q}` of the point
    interaction at the origin in :math:`\mathbb{R}^3` with Hermitian matrix
    potential `Q` (a matrix, or a 1-D list of its eigenvalues).

    The derivatives

    .. math::

        M'(\lambda) = \tfrac{i}{2}(\lambda - Q)^{-1/2}, \qquad
        M''(\lambda) = -\tfrac{i}{4}(\lambda - Q)^{-3/2}

    are evaluated on the same eigendecomposition and the same square-root
    branch. The valid interval is ``(-inf, min eig Q)``.
    """
    q = mc.as_hermitian(q)
    evals, evecs = np.linalg.eigh(q)

    def root(lam):
        return mc._principal_sqrt(lam - evals)

    def m0(lam):
        return mc.spectral_map(evals, evecs, 1j * root(lam))

    def m1(lam):
        return mc.spectral_map(evals, evecs, 0.5j / root(lam))

    def m2(lam):
        r = root(lam)
        return mc.spectral_map(evals, evecs, -0.25j / ((lam - evals) * r))

    return WeylModel(
        dim=q.shape[0],
        kind="point_interaction",
        valid_interval=(-math.inf, float(evals[0])),
        _eval=m0,
        _deriv1=m1,
        _deriv2=m2,
        params={"q": q, "q_eigenvalues": evals},
    )


def make_scalar_rational(numerator, denominator=(1.0,),
                         interval=(-math.inf, math.inf),
                         herglotz_tol: float = REAL_TOL) -> WeylModel:
    """Scalar Weyl function ``p(λ)/q(λ)`` with real polynomial coefficients
    given in ascending powers.

    ``make_scalar_rational([0, 1])`` is ``M(λ) = λ``;
    ``make_scalar_rational([-1], [0, 1], (0, inf))`` is ``M(λ) = -1/λ``.

    Raises
    ------
    NotHerglotz
        If ``M'`` is negative (beyond `herglotz_tol`) somewhere on a probe grid
        of `interval`.
    ValueError
        If the denominator vanishes inside `interval`.
    """
    p = Polynomial(np.asarray(numerator, dtype=float))
    q = Polynomial(np.asarray(denominator, dtype=float))
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"empty interval {interval}")
    if not np.any(q.coef):
        raise ValueError("zero denominator")
    for r in q.roots():
        if abs(r.imag) < 1e-12 and lo < r.real < hi:
            raise ValueError(f"denominator vanishes at {r.real} inside {interval}")

    # M' = n1 / q^2,  M'' = n2 / q^3
    n1 = p.deriv() * q - p * q.deriv()
    n2 = n1.deriv() * q - 2 * n1 * q.deriv()

    model = WeylModel(
        dim=1,
        kind="scalar_rational",
        valid_interval=(lo, hi),
        _eval=lambda lam: p(lam) / q(lam),
        _deriv1=lambda lam: n1(lam) / q(lam) ** 2,
        _deriv2=lambda lam: n2(lam) / q(lam) ** 3,
        params={"numerator": tuple(p.coef), "denominator": tuple(q.coef)},
    )
    check_herglotz(model, tol=herglotz_tol)
    return model


def make_tabulated(func: Callable, dim: int, interval,
                   fd_step: float = FD_STEP) -> WeylModel:
    """Wrap a user evaluator ``λ -> (dim, dim)`` matrix.

    No Herglotz or Hermiticity check is done here; run :func:`check_herglotz`
    and :func:`check_hermitian` when the source is untrusted.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise ValueError(f"empty interval {interval}")
    return WeylModel(dim=int(dim), kind="tabulated", valid_interval=(lo, hi),
                     _eval=func, fd_step=fd_step)


def probe_grid(interval, n: int = 64, window: float = 10.0) -> np.ndarray:
    """Interior probe points of an open interval.

    Infinite ends are replaced by a finite window of width
    ``window * max(1, |finite end|)``.
    """
    lo, hi = interval
    if math.isinf(lo) and math.isinf(hi):
        lo, hi = -window, window
    elif math.isinf(lo):
        lo = hi - window * max(1.0, abs(hi))
    elif math.isinf(hi):
        hi = lo + window * max(1.0, abs(lo))
    margin = 1e-3 * (hi - lo)
    return np.linspace(lo + margin, hi - margin, n)


def check_hermitian(model: WeylModel, grid=None, tol: float = REAL_TOL) -> float:
    """Largest ``max|M - M^*|`` over `grid`; raises
    :class:`NonRealDeterminant` above `tol`."""
    grid = probe_grid(model.valid_interval) if grid is None else grid
    worst = 0.0
    for lam in grid:
        m = model.eval(lam)
        worst = max(worst, mc.max_norm(m - m.conj().T))
    if worst > tol:
        raise NonRealDeterminant(f"Weyl function not Hermitian: deviation {worst:.3e}")
    return worst


def check_herglotz(model: WeylModel, grid=None, tol: float = REAL_TOL) -> float:
    """Smallest eigenvalue of the Hermitian part of ``M'`` over `grid`.

    Raises :class:`NotHerglotz` when it drops below ``-tol``.
    """
    grid = probe_grid(model.valid_interval) if grid is None else grid
    worst = math.inf
    for lam in grid:
        d1 = model.deriv1(lam)
        worst = min(worst, float(np.linalg.eigvalsh(0.5 * (d1 + d1.conj().T))[0]))
    if worst < -tol:
        raise NotHerglotz(f"M' has eigenvalue {worst:.3e} < 0")
    return worst


@dataclass(frozen=True)
class ExtensionSpectrumProbe:
    """``λ -> det(param I - M(λ))`` and its derivative by Jacobi's formula."""

    model: WeylModel
    boundary_parameter: float

    def matrix(self, lam: float) -> np.ndarray:
        return self.boundary_parameter * np.eye(self.model.dim) - self.model.eval(lam)

    def detfun(self, lam: float) -> float:
        m = self.matrix(lam)
        return real_part(mc.det(m), mc.hadamard_bound(m), what="det(pI - M)")

    def detfun_deriv(self, lam: float) -> float:
        m = self.matrix(lam)
        d1 = self.model.deriv1(lam)
        val = -mc.trace(mc.adjugate(m) @ d1)
        scale = mc.hadamard_bound(m) * max(1.0, mc.max_norm(d1))
        return real_part(val, scale, what="d/dλ det(pI - M)")

    def scale(self, lam: float) -> float:
        """Round-off scale of :meth:`detfun` at `lam`."""
        return max(1.0, mc.hadamard_bound(self.matrix(lam)))

    def __call__(self, lam: float) -> float:
        return self.detfun(lam)


def detfun(model: WeylModel, param: float) -> ExtensionSpectrumProbe:
    return ExtensionSpectrumProbe(model, float(param))


def _polish(probe, lam, lo, hi, steps=3):
    # Newton steps accepted only while they shrink the residual
    f = probe(lam)
    for _ in range(steps):
        if f == 0.0:
            break
        slope = probe.detfun_deriv(lam)
        if slope == 0.0:
            break
        new = lam - f / slope
        if not lo <= new <= hi:
            break
        f_new = probe(new)
        if abs(f_new) >= abs(f):
            break
        lam, f = new, f_new
    return lam


def find_isolated_eigenvalue(probe: ExtensionSpectrumProbe, bracket=None,
                             lambda0: float | None = None,
                             root_tol: float = ROOT_TOL,
                             simple_tol: float = SIMPLE_TOL) -> float:
    """Locate a simple zero of ``det(param I - M(λ))``.

    Either `bracket` ``(lo, hi)`` with a sign change or an exact `lambda0`
    must be supplied. The zero is then certified: the residual must not
    exceed ``root_tol`` times the determinant scale, and the derivative must
    satisfy ``|D'(λ0)| >= simple_tol``.

    Raises
    ------
    NoSignChange
        `bracket` does not enclose a sign change.
    NotEigenvalue
        The located point does not annihilate the determinant (e.g. a pole).
    NotSimple
        The zero is degenerate.
    """
    if lambda0 is None:
        if bracket is None:
            raise ValueError("need a bracket or an explicit lambda0")
        lo, hi = float(bracket[0]), float(bracket[1])
        f_lo, f_hi = probe(lo), probe(hi)
        if f_lo == 0.0:
            lambda0 = lo
        elif f_hi == 0.0:
            lambda0 = hi
        elif np.sign(f_lo) == np.sign(f_hi):
            raise NoSignChange(f"det(pI - M) has equal signs at {lo} and {hi}")
        else:
            lambda0 = brentq(probe, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                             maxiter=200)
            lambda0 = _polish(probe, lambda0, lo, hi)
    lambda0 = float(lambda0)
    resid = abs(probe(lambda0))
    if resid > root_tol * probe.scale(lambda0):
        raise NotEigenvalue(f"|det(pI - M({lambda0}))| = {resid:.3e} is not a root")
    slope = probe.detfun_deriv(lambda0)
    if abs(slope) < simple_tol:
        raise NotSimple(f"|D'({lambda0})| = {abs(slope):.3e} < {simple_tol}")
    return lambda0
