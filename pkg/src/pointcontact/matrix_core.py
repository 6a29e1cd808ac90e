r"""Small dense complex linear algebra.

Matrices are plain ``(d, d)`` complex ndarrays; ``d`` is tiny (the deficiency
index of the model, rarely above 8). The one non-standard routine is the
adjugate, which is computed by the Faddeev--LeVerrier recursion so that it is
exact for singular input:

.. math::

    L \operatorname{adj}(L) = \operatorname{adj}(L) L = \det(L) I .

Square roots use the principal branch with the cut on :math:`(-\infty, 0]`.
This is the single branch convention of the package; below the spectrum of
``q`` it gives :math:`i\sqrt{s - q_k} = -\sqrt{q_k - s}`.
"""
from __future__ import annotations

import numpy as np

from .errors import NotHermitian, SingularMatrix

__all__ = [
    "as_matrix",
    "as_hermitian",
    "det",
    "adjugate",
    "inverse",
    "trace",
    "hermitian_sqrt",
    "spectral_map",
    "max_norm",
    "hadamard_bound",
    "allclose",
    "richardson_deriv1",
    "richardson_deriv2",
]

HERMITIAN_TOL = 1e-12
SINGULAR_TOL = 1e-12


def as_matrix(m) -> np.ndarray:
    """Return `m` as a square complex matrix, promoting scalars to 1x1."""
    arr = np.array(m, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def max_norm(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def allclose(m1, m2, tol: float = 1e-12) -> bool:
    """Entrywise max-norm comparison."""
    return max_norm(np.asarray(m1) - np.asarray(m2)) <= tol


def hadamard_bound(m) -> float:
    """Hadamard's bound ``prod_i ||row_i||_2``, an upper bound for ``|det(m)|``.

    Used as the natural scale of determinant round-off.
    """
    m = as_matrix(m)
    return float(np.prod(np.linalg.norm(m, axis=1)))


def as_hermitian(q, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate and symmetrize a Hermitian matrix.

    A 1-D input is read as the eigenvalue list of a diagonal matrix.

    Raises
    ------
    NotHermitian
        If ``max|q - q^*|`` exceeds ``tol * max(1, max|q|)``.
    """
    arr = np.asarray(q)
    if arr.ndim == 1:
        arr = np.diag(arr)
    arr = as_matrix(arr)
    dev = max_norm(arr - arr.conj().T)
    if dev > tol * max(1.0, max_norm(arr)):
        raise NotHermitian(f"matrix deviates from its adjoint by {dev:.3e}")
    return 0.5 * (arr + arr.conj().T)


def det(m) -> complex:
    """Determinant by LU with partial pivoting (LAPACK)."""
    m = as_matrix(m)
    if m.shape[0] == 1:
        return complex(m[0, 0])
    return complex(np.linalg.det(m))


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def _faddeev_leverrier(m):
    # Returns (c, N) where det(t I - m) = sum_k c[k] t^k and N = M_n with
    # adj(m) = (-1)^(n-1) N.
    n = m.shape[0]
    eye = np.eye(n, dtype=complex)
    c = np.zeros(n + 1, dtype=complex)
    c[n] = 1.0
    big_m = np.zeros_like(m)
    for k in range(1, n + 1):
        big_m = m @ big_m + c[n - k + 1] * eye
        c[n - k] = -np.trace(m @ big_m) / k
    return c, big_m


def adjugate(m) -> np.ndarray:
    """Adjugate (transposed cofactor matrix) by the Faddeev--LeVerrier recursion.

    No division by the determinant takes place, so singular matrices are
    handled like any other. ``adjugate([[0]])`` is ``[[1]]``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n == 1:
        return np.ones((1, 1), dtype=complex)
    _, big_m = _faddeev_leverrier(m)
    return (-1) ** (n - 1) * big_m


def inverse(m, singular_tol: float = SINGULAR_TOL) -> np.ndarray:
    """Matrix inverse.

    Raises
    ------
    SingularMatrix
        If ``|det(m)| <= singular_tol * max|m|**d``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if abs(det(m)) <= singular_tol * max_norm(m) ** n:
        raise SingularMatrix("matrix is numerically singular")
    return np.linalg.inv(m)


def spectral_map(evals, evecs, values) -> np.ndarray:
    """Assemble ``U diag(values) U^*`` from an eigendecomposition."""
    return (evecs * np.asarray(values)) @ evecs.conj().T


def _principal_sqrt(z):
    # astype(complex) yields +0.0 imaginary parts, keeping negative reals on
    # the upper side of the cut: sqrt(-4) = 2j, never -2j.
    return np.sqrt(np.asarray(z, dtype=float).astype(complex))


def hermitian_sqrt(q, shift: float) -> np.ndarray:
    r"""Return :math:`i\sqrt{s I - q}` for Hermitian `q` and real shift `s`.

    Computed through the spectral decomposition of `q` with the principal
    scalar square root on each eigenvalue. For ``shift < min eig(q)`` the
    result is the negative definite matrix :math:`-\sqrt{q - s}`.

    Examples
    --------
    >>> hermitian_sqrt([[0.0]], -4.0)
    array([[-2.+0.j]])
    """
    q = as_hermitian(q)
    evals, evecs = np.linalg.eigh(q)
    return spectral_map(evals, evecs, 1j * _principal_sqrt(shift - evals))


def richardson_deriv1(f, x: float, h: float):
    """First derivative by two central differences at ``h`` and ``h/2``,
    combined by Richardson extrapolation (error O(h^4))."""
    def central(step):
        return (np.asarray(f(x + step)) - np.asarray(f(x - step))) / (2 * step)

    return (4 * central(h / 2) - central(h)) / 3


def richardson_deriv2(f, x: float, h: float):
    """Second derivative, same scheme as :func:`richardson_deriv1`."""
    f0 = np.asarray(f(x))

    def central(step):
        return (np.asarray(f(x + step)) - 2 * f0 + np.asarray(f(x - step))) / step**2

    return (4 * central(h / 2) - central(h)) / 3
