r"""Two systems joined by a point contact.

The coupled extension is labeled by the Hermitian ``2d x 2d`` matrix

.. math::

    \Lambda = \begin{pmatrix} \alpha I & \omega I \\ \bar\omega I & \beta I \end{pmatrix},

and ``λ`` is one of its discrete eigenvalues iff
``det(Λ - diag(M̃(λ), M̂(λ))) = 0``. Because the off-diagonal blocks are
multiples of the identity they commute with everything, and the block
determinant collapses to the ``d x d`` characteristic function

.. math::

    F(\lambda, x) = \det\big(T(\lambda) - x I\big), \qquad
    T(\lambda) = (\alpha I - \tilde M(\lambda))(\beta I - \hat M(\lambda)),

evaluated at ``x = |ω|²``. Both routes are kept: :func:`block_det` is the
direct transcription, :func:`char_fn` the reduced form.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import matrix_core as mc
from .errors import DimensionMismatch, OutOfInterval
from .weyl import WeylModel, real_part

__all__ = [
    "CouplingSpec",
    "CoupledSystem",
    "t_matrix",
    "char_fn",
    "char_fn_dlambda",
    "char_fn_dx",
    "block_matrix",
    "block_det",
]


@dataclass(frozen=True)
class CouplingSpec:
    alpha: float
    beta: float
    omega: complex = 0.0
    dim: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        for name in ("alpha", "beta"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        lam = self.matrix()
        assert mc.allclose(lam, lam.conj().T, 0.0)

    @property
    def x(self) -> float:
        """Squared coupling strength ``|ω|²``."""
        return abs(self.omega) ** 2

    def matrix(self) -> np.ndarray:
        """The boundary matrix Λ."""
        eye = np.eye(self.dim)
        w = complex(self.omega)
        return np.block([[self.alpha * eye, w * eye],
                         [np.conj(w) * eye, self.beta * eye]]).astype(complex)


@dataclass(frozen=True)
class CoupledSystem:
    """Weyl functions of both subsystems together with the coupling data.

    `tilde` carries boundary parameter ``alpha``, `hat` carries ``beta``; the
    unperturbed eigenvalue is expected on the `hat` side.
    """

    tilde: WeylModel
    hat: WeylModel
    coupling: CouplingSpec

    def __post_init__(self):
        if not (self.tilde.dim == self.hat.dim == self.coupling.dim):
            raise DimensionMismatch(
                f"dims differ: tilde={self.tilde.dim}, hat={self.hat.dim}, "
                f"coupling={self.coupling.dim}")
        lo, hi = self.working_interval
        if not lo < hi:
            raise ValueError("valid intervals of the two Weyl functions do not overlap")

    @classmethod
    def build(cls, tilde: WeylModel, hat: WeylModel, alpha: float, beta: float,
              omega: complex = 0.0) -> "CoupledSystem":
        return cls(tilde, hat, CouplingSpec(float(alpha), float(beta), omega, tilde.dim))

    @property
    def dim(self) -> int:
        return self.coupling.dim

    @property
    def alpha(self) -> float:
        return self.coupling.alpha

    @property
    def beta(self) -> float:
        return self.coupling.beta

    @property
    def working_interval(self) -> tuple[float, float]:
        return (max(self.tilde.valid_interval[0], self.hat.valid_interval[0]),
                min(self.tilde.valid_interval[1], self.hat.valid_interval[1]))

    def contains(self, lam: float) -> bool:
        lo, hi = self.working_interval
        return lo < lam < hi

    def check(self, lam: float):
        if not self.contains(lam):
            raise OutOfInterval(
                f"lambda={lam!r} outside working interval {self.working_interval}")

    def with_omega(self, omega: complex) -> "CoupledSystem":
        return replace(self, coupling=replace(self.coupling, omega=omega))

    def swapped(self) -> "CoupledSystem":
        """Exchange the roles of the two subsystems, ``(M̃, α) <-> (M̂, β)``."""
        c = self.coupling
        return CoupledSystem(self.hat, self.tilde,
                             CouplingSpec(c.beta, c.alpha, np.conj(c.omega), c.dim))

    def factors(self, lam: float):
        """``(αI - M̃(λ), βI - M̂(λ))``."""
        self.check(lam)
        eye = np.eye(self.dim)
        return self.alpha * eye - self.tilde.eval(lam), self.beta * eye - self.hat.eval(lam)


def t_matrix(sys: CoupledSystem, lam: float) -> np.ndarray:
    """``T(λ) = (αI - M̃(λ))(βI - M̂(λ))``; not Hermitian in general."""
    left, right = sys.factors(lam)
    return left @ right


def _shifted(sys, lam, x):
    if x < 0:
        raise ValueError(f"x = |omega|^2 must be nonnegative, got {x}")
    return t_matrix(sys, lam) - x * np.eye(sys.dim)


def char_fn(sys: CoupledSystem, lam: float, x: float) -> float:
    """``F(λ, x) = det(T(λ) - x I)``, checked to be real."""
    m = _shifted(sys, lam, x)
    return real_part(mc.det(m), mc.hadamard_bound(m), what="F(λ, x)")


def char_fn_dlambda(sys: CoupledSystem, lam: float, x: float) -> float:
    """``∂F/∂λ`` by Jacobi's formula, ``tr(adj(T - xI) T'(λ))`` with
    ``T' = -M̃'(βI - M̂) - (αI - M̃)M̂'``."""
    left, right = sys.factors(lam)
    m = left @ right - x * np.eye(sys.dim)
    dt = -sys.tilde.deriv1(lam) @ right - left @ sys.hat.deriv1(lam)
    val = mc.trace(mc.adjugate(m) @ dt)
    scale = max(1.0, mc.hadamard_bound(m)) * max(1.0, mc.max_norm(dt))
    return real_part(val, scale, what="F_λ")


def char_fn_dx(sys: CoupledSystem, lam: float, x: float) -> float:
    """``∂F/∂x = -tr(adj(T(λ) - xI))``."""
    m = _shifted(sys, lam, x)
    val = -mc.trace(mc.adjugate(m))
    return real_part(val, max(1.0, mc.hadamard_bound(m)), what="F_x")


def block_matrix(sys: CoupledSystem, lam: float) -> np.ndarray:
    """``Λ - diag(M̃(λ), M̂(λ))``, the ``2d x 2d`` Hermitian matrix whose
    kernel dimension equals the multiplicity of ``λ``."""
    sys.check(lam)
    d = sys.dim
    m = sys.coupling.matrix()
    m[:d, :d] -= sys.tilde.eval(lam)
    m[d:, d:] -= sys.hat.eval(lam)
    return m


def block_det(sys: CoupledSystem, lam: float) -> float:
    """Determinant of :func:`block_matrix` by direct LU."""
    m = block_matrix(sys, lam)
    return real_part(mc.det(m), mc.hadamard_bound(m), what="block determinant")
