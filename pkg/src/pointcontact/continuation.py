"""Numerical branch tracking, the independent check of the expansion.

For each ``x = |ω|²`` on an increasing grid the root ``λ(x)`` of
``F(λ, x) = 0`` is found by Newton's method with the analytic ``F_λ``,
warm-started from the previous sample and safeguarded by bisection on a
sign-change bracket. Fitting ``λ(x) - λ0`` against powers of ``x`` then
recovers the expansion coefficients empirically, and the log-log slope of the
remainder measures the order of the truncation error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contact import CoupledSystem, char_fn, char_fn_dlambda, t_matrix
from . import matrix_core as mc
from .errors import (BracketLost, InsufficientSamples, LeftInterval,
                     NewtonDiverged, NotSimple)
from .perturbation import ExpansionResult, check_hypotheses
from .weyl import ROOT_TOL, SIMPLE_TOL

__all__ = [
    "BranchSample",
    "BranchTrace",
    "FitResult",
    "geometric_grid",
    "solve_branch_point",
    "track_branch",
    "fit_coefficients",
    "remainder_slope",
    "NOISE_FLOOR_ULPS",
]

EPS = np.finfo(float).eps
# Remainders within this many ulps of |λ0| are treated as round-off.
NOISE_FLOOR_ULPS = 256


@dataclass(frozen=True)
class BranchSample:
    x: float
    lam: float
    residual: float
    newton_iters: int
    f_lambda: float


@dataclass(frozen=True)
class FitResult:
    """Empirical expansion of a tracked branch.

    ``higher_hat`` is the fitted coefficient of ``x**(order + 1)``. It absorbs
    the truncation error during the fit and, for ``d > 1``, is the only
    available (non-analytic) estimate of the second-order coefficient.
    """

    order: int
    a_hat: float
    b_hat: float | None
    higher_hat: float
    remainder_slope: float
    slope_window: tuple[float, float] | None


@dataclass(frozen=True)
class BranchTrace:
    samples: tuple[BranchSample, ...]
    lambda0: float
    fitted: FitResult | None = None

    @property
    def xs(self) -> np.ndarray:
        return np.array([s.x for s in self.samples], dtype=float)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([s.lam for s in self.samples], dtype=float)

    def __len__(self):
        return len(self.samples)


def geometric_grid(lo: float = 1e-6, hi: float = 1e-3, per_decade: int = 8) -> np.ndarray:
    """Geometric grid from `lo` to `hi` inclusive, `per_decade` steps per decade.

    The default has 25 points.
    """
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    n = int(round(per_decade * math.log10(hi / lo))) + 1
    return np.logspace(math.log10(lo), math.log10(hi), max(n, 2))


def _find_bracket(f, seed, f_seed, interval, width0):
    lo_lim, hi_lim = interval
    # keep evaluation strictly inside the open interval
    if math.isfinite(hi_lim):
        hi_lim = hi_lim - 1e-12 * max(1.0, abs(hi_lim))
    if math.isfinite(lo_lim):
        lo_lim = lo_lim + 1e-12 * max(1.0, abs(lo_lim))
    s = width0
    for _ in range(200):
        lo, hi = max(seed - s, lo_lim), min(seed + s, hi_lim)
        f_lo, f_hi = f(lo), f(hi)
        if np.sign(f_lo) != np.sign(f_seed):
            return lo, seed, f_lo, f_seed
        if np.sign(f_hi) != np.sign(f_seed):
            return seed, hi, f_seed, f_hi
        if lo == lo_lim and hi == hi_lim:
            break
        s *= 2.0
    raise BracketLost(f"no sign change of F around seed {seed!r}")


def solve_branch_point(sys: CoupledSystem, x: float, seed: float, width0: float | None = None,
                       root_tol: float = ROOT_TOL, simple_tol: float = SIMPLE_TOL,
                       max_iter: int = 100) -> BranchSample:
    """Solve ``F(λ, x) = 0`` for ``λ`` near `seed`."""
    if not sys.contains(seed):
        raise LeftInterval(f"seed {seed!r} outside working interval {sys.working_interval}")

    def f(lam):
        return char_fn(sys, lam, x)

    f_seed = f(seed)
    lam = seed
    iters = 0
    if f_seed != 0.0:
        if width0 is None:
            width0 = 1e-9 * max(1.0, abs(seed))
        lo, hi, f_lo, _ = _find_bracket(f, seed, f_seed, sys.working_interval, width0)
        lam, f_lam = seed, f_seed
        converged = False
        while iters < max_iter:
            iters += 1
            tol = 2 * EPS * max(1.0, abs(lam))
            fp = char_fn_dlambda(sys, lam, x)
            new = lam - f_lam / fp if fp != 0.0 else math.nan
            if abs(new - lam) <= tol:
                if lo <= new <= hi:
                    lam = new
                converged = True
                break
            if not lo < new < hi:
                new = 0.5 * (lo + hi)
            lam = new
            f_lam = f(lam)
            if f_lam == 0.0 or hi - lo <= 2 * tol:
                converged = True
                break
            if np.sign(f_lam) == np.sign(f_lo):
                lo, f_lo = lam, f_lam
            else:
                hi = lam
        if not converged:
            raise NewtonDiverged(f"no convergence at x={x!r} after {max_iter} iterations",
                                 last_iterate=lam)
    if not sys.contains(lam):
        raise LeftInterval(f"root {lam!r} left working interval {sys.working_interval}")
    resid = abs(char_fn(sys, lam, x))
    scale = max(1.0, mc.hadamard_bound(t_matrix(sys, lam) - x * np.eye(sys.dim)))
    if resid > root_tol * scale:
        raise NewtonDiverged(f"residual {resid:.3e} above tolerance at x={x!r}",
                             last_iterate=lam)
    fp = char_fn_dlambda(sys, lam, x)
    if abs(fp) < simple_tol:
        raise NotSimple(f"|F_λ| = {abs(fp):.3e} at x={x!r}: branch is not simple")
    return BranchSample(float(x), float(lam), float(resid), iters, float(fp))


def track_branch(sys: CoupledSystem, lambda0: float, xs, slope: float | None = None,
                 reference: ExpansionResult | None = None, root_tol: float = ROOT_TOL,
                 simple_tol: float = SIMPLE_TOL, check: bool = True) -> BranchTrace:
    """Follow the eigenvalue branch through ``λ0`` along increasing `xs`.

    Parameters
    ----------
    sys : CoupledSystem
    lambda0 : float
        Unperturbed eigenvalue on the `hat` side.
    xs : sequence of float
        Strictly increasing values of ``|ω|²``.
    slope : float, optional
        Known first-order coefficient, only used to seed the first solve.
    reference : ExpansionResult, optional
        Expansion whose remainder is measured when the trace is fitted.
    check : bool
        Verify the hypotheses at ``λ0`` first.

    The trace is fitted automatically (order 2 for ``d = 1``, else 1) when
    there are at least four positive samples spanning a decade.
    """
    xs = [float(x) for x in xs]
    if any(x < 0 for x in xs):
        raise ValueError("xs must be nonnegative")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("xs must be strictly increasing")
    if check:
        check_hypotheses(sys, lambda0, root_tol, simple_tol)
    if slope is None and reference is not None:
        slope = reference.a

    samples = []
    prev_lam, prev_x = float(lambda0), 0.0
    for i, x in enumerate(xs):
        seed = prev_lam + slope * (x - prev_x) if (i == 0 and slope is not None) else prev_lam
        width0 = max(abs(seed - prev_lam), 1e-9 * max(1.0, abs(seed)))
        sample = solve_branch_point(sys, x, seed, width0, root_tol, simple_tol)
        samples.append(sample)
        prev_lam, prev_x = sample.lam, x

    trace = BranchTrace(tuple(samples), float(lambda0))
    if _fittable(trace):
        try:
            fitted = fit_coefficients(trace, 2 if sys.dim == 1 else 1, reference)
        except InsufficientSamples:
            fitted = None
        trace = BranchTrace(trace.samples, trace.lambda0, fitted)
    return trace


def _positive(trace):
    x, lam = trace.xs, trace.lambdas
    keep = x > 0
    return x[keep], lam[keep]


def _fittable(trace):
    x, _ = _positive(trace)
    return len(x) >= 4 and x[-1] >= 10 * x[0]


def remainder_slope(x, remainder, lambda0: float = 0.0, noise_floor: float | None = None):
    """Log-log slope of ``|remainder|`` against ``x`` over the smallest decade
    of `x` that lies above the round-off floor.

    The floor defaults to ``NOISE_FLOOR_ULPS`` ulps of ``max(1, |lambda0|)``.
    Returns ``(slope, (x_lo, x_hi))``; the slope is NaN and the window
    ``None`` when the remainder is round-off everywhere (exact data).
    """
    x = np.asarray(x, dtype=float)
    r = np.abs(np.asarray(remainder, dtype=float))
    if noise_floor is None:
        noise_floor = NOISE_FLOOR_ULPS * EPS * max(1.0, abs(lambda0))
    above = r > noise_floor
    # first index from which every remainder is resolvable
    start = None
    for i in range(len(x)):
        if above[i:].all():
            start = i
            break
    if start is None:
        return math.nan, None
    window = (x >= x[start]) & (x <= 10 * x[start] * (1 + 1e-12))
    if window.sum() < 3:
        raise InsufficientSamples(
            f"fewer than 3 resolvable samples in the decade starting at x={x[start]:.3e}")
    slope = np.polyfit(np.log(x[window]), np.log(r[window]), 1)[0]
    return float(slope), (float(x[window][0]), float(x[window][-1]))


def fit_coefficients(trace: BranchTrace, order: int = 1,
                     reference: ExpansionResult | None = None,
                     noise_floor: float | None = None) -> FitResult:
    """Least-squares fit of ``λ(x) - λ0`` against ``x, ..., x**(order + 1)``.

    The extra top power absorbs the truncation error so that the reported
    coefficients are not biased by it. The remainder slope is measured for
    `reference` truncated to `order` if given, else for the fitted polynomial
    of degree `order`.

    Raises
    ------
    InsufficientSamples
        Fewer than four positive samples, or a span of less than one decade.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if not _fittable(trace):
        raise InsufficientSamples("need >= 4 samples with x > 0 spanning a decade")
    x, lam = _positive(trace)
    y = lam - trace.lambda0
    xmax = x[-1]
    powers = np.arange(1, order + 2)
    design = (x[:, None] / xmax) ** powers
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    coef = coef / xmax**powers
    a_hat = float(coef[0])
    b_hat = float(coef[1]) if order == 2 else None

    if reference is not None:
        ref = reference.truncated(order)
        if ref.order < order:
            raise ValueError(f"reference expansion has order {ref.order} < {order}")
        approx = ref(x)
    else:
        approx = trace.lambda0 + sum(coef[k] * x ** (k + 1) for k in range(order))
    slope, window = remainder_slope(x, lam - approx, trace.lambda0, noise_floor)
    return FitResult(order, a_hat, b_hat, float(coef[-1]), slope, window)
