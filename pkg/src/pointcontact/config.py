"""Scenario files.

A scenario is a JSON object (a batch file is a JSON list of them)::

    {
      "model_tilde": {"kind": "point_interaction", "q_eigenvalues": [0.0]},
      "model_hat":   {"kind": "point_interaction", "q_eigenvalues": [0.0]},
      "alpha": -1.0,
      "beta": -2.0,
      "omega_abs2_grid": {"geometric": {"lo": 1e-6, "hi": 1e-3, "per_decade": 8}},
      "lambda0": [-5.0, -3.0],
      "tolerances": {"root_tol": 1e-12, "simple_tol": 1e-8, "fd_step": 1e-3},
      "output": {"format": "json", "path": null}
    }

Model descriptors:

``{"kind": "point_interaction", "q_eigenvalues": [...]}``
    diagonal potential given by its eigenvalues;
``{"kind": "point_interaction", "q_matrix": [[...], ...]}``
    dense Hermitian potential, complex entries written as ``[re, im]``;
``{"kind": "scalar_rational", "numerator": [...], "denominator": [...], "interval": [lo, hi]}``
    ``p(λ)/q(λ)`` with ascending coefficients; ``null`` interval ends are
    infinite.

``lambda0`` is a number (taken as exact), a bracket ``[lo, hi]``, or absent;
absent is allowed when `model_hat` is a point interaction and resolves to
``min eig Q̂ - beta**2``. ``omega_abs2_grid`` is an explicit increasing list
or a geometric spec; absent means the default geometric grid.

Tolerances come from the built-in defaults, overridden in turn by the
``POINTCONTACT_ROOT_TOL`` / ``POINTCONTACT_SIMPLE_TOL`` /
``POINTCONTACT_FD_STEP`` environment variables, the scenario file, and the
command line flags.

``fault_injection: "flip_sqrt_argument"`` is a test hook that replaces every
point interaction by the wrong-branch function ``i sqrt(Q - λ)``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import matrix_core as mc
from .continuation import geometric_grid
from .errors import ConfigError
from .weyl import (FD_STEP, ROOT_TOL, SIMPLE_TOL, WeylModel, make_point_interaction,
                   make_scalar_rational, make_tabulated)

__all__ = ["Tolerances", "ScenarioConfig", "load_scenarios", "parse_scenario",
           "build_model", "q_eigenvalues", "ENV_PREFIX"]

ENV_PREFIX = "POINTCONTACT_"
FAULTS = ("flip_sqrt_argument",)
DEFAULT_GRID = {"geometric": {"lo": 1e-6, "hi": 1e-3, "per_decade": 8}}


@dataclass(frozen=True)
class Tolerances:
    root_tol: float = ROOT_TOL
    simple_tol: float = SIMPLE_TOL
    fd_step: float = FD_STEP

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        tol = cls()
        for name in ("root_tol", "simple_tol", "fd_step"):
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                tol = tol.updated(**{name: _positive(raw, ENV_PREFIX + name.upper())})
        return tol

    def updated(self, **kwargs) -> "Tolerances":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        unknown = set(kwargs) - {"root_tol", "simple_tol", "fd_step"}
        if unknown:
            raise ConfigError(f"unknown tolerance keys {sorted(unknown)}")
        return replace(self, **{k: _positive(v, k) for k, v in kwargs.items()})

    def as_dict(self) -> dict:
        return {"root_tol": self.root_tol, "simple_tol": self.simple_tol,
                "fd_step": self.fd_step}


def _positive(value, name):
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be positive and finite, got {value!r}")
    return value


def _finite(value, name):
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number")
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite")
    return value


def _complex_entry(v, name):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"{name}: complex entries are [re, im] pairs")
        return complex(_finite(v[0], name), _finite(v[1], name))
    return complex(_finite(v, name))


def _check_model(desc, name):
    if not isinstance(desc, dict):
        raise ConfigError(f"{name} must be an object")
    kind = desc.get("kind")
    if kind == "point_interaction":
        has_eigs, has_mat = "q_eigenvalues" in desc, "q_matrix" in desc
        if has_eigs == has_mat:
            raise ConfigError(f"{name}: give exactly one of q_eigenvalues, q_matrix")
        if has_eigs:
            eigs = desc["q_eigenvalues"]
            if not isinstance(eigs, list) or not eigs:
                raise ConfigError(f"{name}.q_eigenvalues must be a non-empty list")
            return {"kind": kind,
                    "q_eigenvalues": [_finite(v, name + ".q_eigenvalues") for v in eigs]}
        rows = desc["q_matrix"]
        if (not isinstance(rows, list) or not rows
                or any(not isinstance(r, list) or len(r) != len(rows) for r in rows)):
            raise ConfigError(f"{name}.q_matrix must be a square list of lists")
        mat = [[_complex_entry(v, name + ".q_matrix") for v in r] for r in rows]
        try:
            mc.as_hermitian(np.array(mat))
        except ValueError as exc:
            raise ConfigError(f"{name}.q_matrix: {exc}") from None
        return {"kind": kind, "q_matrix": desc["q_matrix"]}
    if kind == "scalar_rational":
        num = desc.get("numerator")
        den = desc.get("denominator", [1.0])
        if not isinstance(num, list) or not num or not isinstance(den, list) or not den:
            raise ConfigError(f"{name}: numerator/denominator must be non-empty lists")
        interval = desc.get("interval", [None, None])
        if not isinstance(interval, list) or len(interval) != 2:
            raise ConfigError(f"{name}.interval must be [lo, hi]")
        lo = -math.inf if interval[0] is None else _finite(interval[0], name)
        hi = math.inf if interval[1] is None else _finite(interval[1], name)
        if not lo < hi:
            raise ConfigError(f"{name}.interval is empty")
        return {"kind": kind,
                "numerator": [_finite(v, name) for v in num],
                "denominator": [_finite(v, name) for v in den],
                "interval": [interval[0] if interval[0] is None else lo,
                             interval[1] if interval[1] is None else hi]}
    raise ConfigError(f"{name}.kind must be 'point_interaction' or 'scalar_rational'")


def _model_dim(desc):
    if desc["kind"] == "scalar_rational":
        return 1
    if "q_eigenvalues" in desc:
        return len(desc["q_eigenvalues"])
    return len(desc["q_matrix"])


def q_eigenvalues(desc: dict) -> np.ndarray:
    """Sorted eigenvalues of the potential of a point-interaction descriptor."""
    if "q_eigenvalues" in desc:
        return np.sort(np.asarray(desc["q_eigenvalues"], dtype=float))
    q = np.array([[_complex_entry(v, "q_matrix") for v in r] for r in desc["q_matrix"]])
    return np.linalg.eigvalsh(mc.as_hermitian(q))


def build_model(desc: dict, fault: str | None = None, fd_step: float = FD_STEP) -> WeylModel:
    """Construct the Weyl function described by a validated descriptor."""
    try:
        if desc["kind"] == "point_interaction":
            if "q_eigenvalues" in desc:
                q = np.diag(np.asarray(desc["q_eigenvalues"], dtype=float))
            else:
                q = np.array([[_complex_entry(v, "q_matrix") for v in r]
                              for r in desc["q_matrix"]])
            model = make_point_interaction(q)
            if fault == "flip_sqrt_argument":
                evals, evecs = np.linalg.eigh(model.params["q"])
                model = make_tabulated(
                    lambda lam: mc.spectral_map(
                        evals, evecs, 1j * mc._principal_sqrt(evals - lam)),
                    model.dim, model.valid_interval, fd_step)
            return model
        lo, hi = desc["interval"]
        interval = (-math.inf if lo is None else lo, math.inf if hi is None else hi)
        return make_scalar_rational(desc["numerator"], desc["denominator"], interval)
    except ValueError as exc:
        raise ConfigError(f"invalid model: {type(exc).__name__}: {exc}") from None


def _check_grid(grid):
    if grid is None:
        return DEFAULT_GRID
    if isinstance(grid, list):
        vals = [_finite(v, "omega_abs2_grid") for v in grid]
        if any(v < 0 for v in vals):
            raise ConfigError("omega_abs2_grid entries must be nonnegative")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("omega_abs2_grid must be strictly increasing")
        return vals
    if isinstance(grid, dict) and set(grid) == {"geometric"}:
        g = grid["geometric"]
        if not isinstance(g, dict):
            raise ConfigError("omega_abs2_grid.geometric must be an object")
        lo = _finite(g.get("lo"), "geometric.lo")
        hi = _finite(g.get("hi"), "geometric.hi")
        per = g.get("per_decade", 8)
        if isinstance(per, bool) or not isinstance(per, int) or per < 1:
            raise ConfigError("geometric.per_decade must be a positive integer")
        if not 0 < lo < hi:
            raise ConfigError("geometric grid needs 0 < lo < hi")
        return {"geometric": {"lo": lo, "hi": hi, "per_decade": per}}
    raise ConfigError("omega_abs2_grid must be a list or {'geometric': {...}}")


@dataclass(frozen=True)
class ScenarioConfig:
    model_tilde: dict
    model_hat: dict
    alpha: float
    beta: float
    omega_abs2_grid: list | dict = field(default_factory=lambda: DEFAULT_GRID)
    lambda0: float | list | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    output: dict = field(default_factory=dict)
    fault_injection: str | None = None

    @property
    def dim(self) -> int:
        return _model_dim(self.model_tilde)

    def grid(self) -> np.ndarray:
        g = self.omega_abs2_grid
        if isinstance(g, dict):
            spec = g["geometric"]
            return geometric_grid(spec["lo"], spec["hi"], spec["per_decade"])
        return np.asarray(g, dtype=float)

    def models(self) -> tuple[WeylModel, WeylModel]:
        fd = self.tolerances.fd_step
        return (build_model(self.model_tilde, self.fault_injection, fd),
                build_model(self.model_hat, self.fault_injection, fd))

    def to_dict(self) -> dict:
        out = {
            "model_tilde": self.model_tilde,
            "model_hat": self.model_hat,
            "alpha": self.alpha,
            "beta": self.beta,
            "omega_abs2_grid": self.omega_abs2_grid,
            "lambda0": self.lambda0,
            "tolerances": self.tolerances.as_dict(),
            "output": dict(self.output),
        }
        if self.fault_injection is not None:
            out["fault_injection"] = self.fault_injection
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


KNOWN_KEYS = {"model_tilde", "model_hat", "alpha", "beta", "omega_abs2_grid", "lambda0",
              "tolerances", "output", "fault_injection"}


def parse_scenario(data: dict, base_tolerances: Tolerances | None = None) -> ScenarioConfig:
    """Validate a scenario object and return the typed config."""
    if not isinstance(data, dict):
        raise ConfigError("scenario must be a JSON object")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys {sorted(unknown)}")
    for key in ("model_tilde", "model_hat", "alpha", "beta"):
        if key not in data:
            raise ConfigError(f"missing required key {key!r}")
    tilde = _check_model(data["model_tilde"], "model_tilde")
    hat = _check_model(data["model_hat"], "model_hat")
    if _model_dim(tilde) != _model_dim(hat):
        raise ConfigError("model_tilde and model_hat have different dimensions")

    lam0 = data.get("lambda0")
    if isinstance(lam0, list):
        if len(lam0) != 2:
            raise ConfigError("lambda0 bracket must be [lo, hi]")
        lam0 = [_finite(v, "lambda0") for v in lam0]
        if not lam0[0] < lam0[1]:
            raise ConfigError("lambda0 bracket must satisfy lo < hi")
    elif lam0 is not None:
        lam0 = _finite(lam0, "lambda0")
    elif hat["kind"] != "point_interaction":
        raise ConfigError("lambda0 is required unless model_hat is a point interaction")

    tol = base_tolerances or Tolerances.from_env()
    tol_data = data.get("tolerances", {})
    if not isinstance(tol_data, dict):
        raise ConfigError("tolerances must be an object")
    tol = tol.updated(**tol_data)

    output = data.get("output", {}) or {}
    if not isinstance(output, dict) or set(output) - {"format", "path"}:
        raise ConfigError("output must be an object with keys format, path")
    if output.get("format") not in (None, "csv", "json"):
        raise ConfigError("output.format must be 'csv' or 'json'")

    fault = data.get("fault_injection")
    if fault is not None and fault not in FAULTS:
        raise ConfigError(f"fault_injection must be one of {FAULTS}")

    return ScenarioConfig(
        model_tilde=tilde,
        model_hat=hat,
        alpha=_finite(data["alpha"], "alpha"),
        beta=_finite(data["beta"], "beta"),
        omega_abs2_grid=_check_grid(data.get("omega_abs2_grid")),
        lambda0=lam0,
        tolerances=tol,
        output=dict(output),
        fault_injection=fault,
    )


def load_scenarios(path, base_tolerances: Tolerances | None = None) -> tuple[list, bool]:
    """Read a scenario file. Returns ``(configs, is_batch)``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from None
    if isinstance(data, list):
        if not data:
            raise ConfigError("empty batch")
        return [parse_scenario(d, base_tolerances) for d in data], True
    return [parse_scenario(data, base_tolerances)], False
