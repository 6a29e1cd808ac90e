r"""Weak-coupling coefficients of the eigenvalue branch.

Let ``λ0`` be a simple eigenvalue of the `hat` extension that lies in the
resolvent set of the `tilde` extension. For small ``x = |ω|²`` the coupled
system has an eigenvalue

.. math::

    \lambda(x) = \lambda_0 + a x + b x^2 + O(x^3),

with, for any dimension,

.. math::

    a = \frac{\operatorname{tr}\big(\operatorname{adj}(\beta I - \hat M(\lambda_0))
                (\tilde M(\lambda_0) - \alpha I)^{-1}\big)}
             {\operatorname{tr}\big(\operatorname{adj}(\beta I - \hat M(\lambda_0))
                \hat M'(\lambda_0)\big)},

and, for ``d = 1``,

.. math::

    b = a^2 \left(\frac{\tilde M'(\lambda_0)}{\alpha - \tilde M(\lambda_0)}
        - \frac{1}{2}\frac{\hat M''(\lambda_0)}{\hat M'(\lambda_0)}\right).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrix_core as mc
from .contact import CoupledSystem
from .errors import (DimensionMismatch, NotEigenvalue, NotResolventPoint,
                     NotSimple, ZeroDenominator)
from .weyl import ROOT_TOL, SIMPLE_TOL, detfun, real_part

__all__ = ["ExpansionResult", "check_hypotheses", "coeff_a", "coeff_ab_scalar",
           "evaluate_expansion", "expansion"]


@dataclass(frozen=True)
class ExpansionResult:
    lambda0: float
    a: float
    b: float | None = None
    order: int = 1
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        if (self.order == 2) != (self.b is not None):
            raise ValueError("b is present exactly when order == 2")

    def __call__(self, x):
        return evaluate_expansion(self, x)

    def truncated(self, order: int) -> "ExpansionResult":
        if order >= self.order:
            return self
        return ExpansionResult(self.lambda0, self.a, None, 1, self.diagnostics)

    def as_dict(self) -> dict:
        out = {"lambda0": self.lambda0, "a": self.a}
        if self.b is not None:
            out["b"] = self.b
        out["order"] = self.order
        out["diagnostics"] = dict(self.diagnostics)
        return out


def evaluate_expansion(res: ExpansionResult, x):
    """``λ0 + a x (+ b x²)``; works elementwise on arrays."""
    x = np.asarray(x, dtype=float)
    val = res.lambda0 + res.a * x
    if res.order == 2:
        val = val + res.b * x**2
    return float(val) if val.ndim == 0 else val


def check_hypotheses(sys: CoupledSystem, lambda0: float,
                     root_tol: float = ROOT_TOL, simple_tol: float = SIMPLE_TOL) -> dict:
    """Certify that `lambda0` is a simple eigenvalue of the `hat` extension
    and a resolvent point of the `tilde` extension.

    Returns the certifying values ``dhat_beta``, ``dhat_beta_prime`` and
    ``dtilde_alpha``.
    """
    sys.check(lambda0)
    hat = detfun(sys.hat, sys.beta)
    tilde = detfun(sys.tilde, sys.alpha)
    dhat = hat.detfun(lambda0)
    if abs(dhat) > root_tol * hat.scale(lambda0):
        raise NotEigenvalue(
            f"det(βI - M̂(λ0)) = {dhat:.3e}: λ0={lambda0} is not an eigenvalue")
    dhat_prime = hat.detfun_deriv(lambda0)
    if abs(dhat_prime) < simple_tol:
        raise NotSimple(f"|D̂'_β(λ0)| = {abs(dhat_prime):.3e} < {simple_tol}")
    dtilde = tilde.detfun(lambda0)
    if abs(dtilde) < simple_tol:
        raise NotResolventPoint(
            f"|det(αI - M̃(λ0))| = {abs(dtilde):.3e}: λ0 is in the spectrum "
            "of the tilde extension")
    return {"dhat_beta": dhat, "dhat_beta_prime": dhat_prime, "dtilde_alpha": dtilde}


def coeff_a(sys: CoupledSystem, lambda0: float, root_tol: float = ROOT_TOL,
            simple_tol: float = SIMPLE_TOL) -> ExpansionResult:
    """First-order coefficient for arbitrary dimension."""
    diag = check_hypotheses(sys, lambda0, root_tol, simple_tol)
    eye = np.eye(sys.dim)
    adj = mc.adjugate(sys.beta * eye - sys.hat.eval(lambda0))
    resolvent = mc.inverse(sys.tilde.eval(lambda0) - sys.alpha * eye)
    d1 = sys.hat.deriv1(lambda0)
    num = mc.trace(adj @ resolvent)
    den = mc.trace(adj @ d1)
    if abs(den) < simple_tol:
        raise ZeroDenominator(f"|tr(adj(βI - M̂) M̂')| = {abs(den):.3e}")
    a = num / den
    scale = max(1.0, abs(a))
    return ExpansionResult(float(lambda0), real_part(a, scale, what="a"), None, 1, diag)


def coeff_ab_scalar(sys: CoupledSystem, lambda0: float, root_tol: float = ROOT_TOL,
                    simple_tol: float = SIMPLE_TOL) -> ExpansionResult:
    """First- and second-order coefficients for ``d = 1``.

    ``a = 1 / F_λ(λ0, 0)`` since ``F_x = -1``; ``b`` is formed as ``a²(...)``,
    which stays accurate when ``F_λ`` is small.
    """
    if sys.dim != 1:
        raise DimensionMismatch(f"second-order coefficient needs d = 1, got d = {sys.dim}")
    diag = check_hypotheses(sys, lambda0, root_tol, simple_tol)
    mt = complex(sys.tilde.eval(lambda0)[0, 0])
    mt1 = complex(sys.tilde.deriv1(lambda0)[0, 0])
    mh1 = complex(sys.hat.deriv1(lambda0)[0, 0])
    mh2 = complex(sys.hat.deriv2(lambda0)[0, 0])
    alpha = sys.alpha

    f_lam = (mt - alpha) * mh1
    f_lamlam = 2 * mt1 * mh1 + (mt - alpha) * mh2
    if abs(f_lam) < simple_tol:
        raise ZeroDenominator(f"|F_λ(λ0, 0)| = {abs(f_lam):.3e}")
    a = 1.0 / f_lam
    b = a**2 * (mt1 / (alpha - mt) - 0.5 * mh2 / mh1)

    diag = dict(diag, f_lambda=real_part(f_lam, what="F_λ"),
                f_lambda_lambda=real_part(f_lamlam, max(1.0, abs(f_lamlam)), what="F_λλ"))
    return ExpansionResult(float(lambda0),
                           real_part(a, max(1.0, abs(a)), what="a"),
                           real_part(b, max(1.0, abs(b)), what="b"), 2, diag)


def expansion(sys: CoupledSystem, lambda0: float, **tols) -> ExpansionResult:
    """Highest available order: ``(a, b)`` for ``d = 1``, ``a`` otherwise."""
    if sys.dim == 1:
        return coeff_ab_scalar(sys, lambda0, **tols)
    return coeff_a(sys, lambda0, **tols)
