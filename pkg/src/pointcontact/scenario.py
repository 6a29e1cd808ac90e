"""Turn a :class:`ScenarioConfig` into results."""
from __future__ import annotations

from .config import ScenarioConfig, q_eigenvalues
from .contact import CoupledSystem
from .continuation import BranchTrace, track_branch
from .errors import ConfigError, NotEigenvalue
from .perturbation import ExpansionResult, expansion
from .weyl import detfun, find_isolated_eigenvalue

__all__ = ["build_system", "resolve_lambda0", "run_coeffs", "run_branch"]


def build_system(config: ScenarioConfig) -> CoupledSystem:
    tilde, hat = config.models()
    try:
        return CoupledSystem.build(tilde, hat, config.alpha, config.beta)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def resolve_lambda0(config: ScenarioConfig, sys: CoupledSystem) -> float:
    """The unperturbed eigenvalue: explicit, bracketed, or the lowest
    point-interaction eigenvalue ``min eig Q̂ - beta**2``."""
    tol = config.tolerances
    probe = detfun(sys.hat, sys.beta)
    lam0 = config.lambda0
    if isinstance(lam0, list):
        return find_isolated_eigenvalue(probe, bracket=lam0, root_tol=tol.root_tol,
                                        simple_tol=tol.simple_tol)
    if lam0 is None:
        if sys.beta >= 0:
            raise NotEigenvalue("a point interaction with beta >= 0 has no eigenvalue "
                                "below its threshold")
        lam0 = float(q_eigenvalues(config.model_hat)[0] - sys.beta**2)
    return find_isolated_eigenvalue(probe, lambda0=lam0, root_tol=tol.root_tol,
                                    simple_tol=tol.simple_tol)


def run_coeffs(config: ScenarioConfig) -> ExpansionResult:
    sys = build_system(config)
    lam0 = resolve_lambda0(config, sys)
    tol = config.tolerances
    return expansion(sys, lam0, root_tol=tol.root_tol, simple_tol=tol.simple_tol)


def run_branch(config: ScenarioConfig) -> tuple[ExpansionResult, BranchTrace]:
    sys = build_system(config)
    lam0 = resolve_lambda0(config, sys)
    tol = config.tolerances
    res = expansion(sys, lam0, root_tol=tol.root_tol, simple_tol=tol.simple_tol)
    trace = track_branch(sys, lam0, config.grid(), reference=res,
                         root_tol=tol.root_tol, simple_tol=tol.simple_tol)
    return res, trace
