"""Command line front end.

::

    pointcontact coeffs --config scenario.json [--format json|csv] [--out PATH]
    pointcontact branch --config scenario.json [--format csv|json] [--out PATH]
    pointcontact verify --config scenario.json [--format json|csv] [--out PATH]

Exit codes: 0 success, 1 configuration error, 2 hypothesis violation
(the error type is printed on stderr), 3 continuation failure, 4 a verify
check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .checks import run_battery
from .config import ScenarioConfig, Tolerances, load_scenarios
from .errors import (ConfigError, ContinuationError, HypothesisViolation, NoSignChange,
                     NonRealDeterminant, NotHerglotz, NotHermitian, OutOfInterval,
                     PointContactError)
from .scenario import run_branch, run_coeffs

__all__ = ["main", "exit_code_for", "BRANCH_COLUMNS"]

EXIT_OK, EXIT_CONFIG, EXIT_HYPOTHESIS, EXIT_CONTINUATION, EXIT_VERIFY = 0, 1, 2, 3, 4
BRANCH_COLUMNS = ("x", "lambda_numeric", "lambda_expansion", "abs_diff", "residual",
                  "newton_iters")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ConfigError, NotHermitian, NotHerglotz)):
        return EXIT_CONFIG
    if isinstance(exc, ContinuationError):
        return EXIT_CONTINUATION
    if isinstance(exc, (HypothesisViolation, NoSignChange, OutOfInterval,
                        NonRealDeterminant)):
        return EXIT_HYPOTHESIS
    return EXIT_CONFIG


def fmt(value) -> str:
    """17 significant digits, enough to round-trip a double."""
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _coeffs(config: ScenarioConfig, fmt_name: str):
    res = run_coeffs(config)
    if fmt_name == "json":
        return res.as_dict(), EXIT_OK
    return _csv(["lambda0", "a", "b", "order"],
                [[res.lambda0, res.a, res.b, res.order]]), EXIT_OK


def _branch(config: ScenarioConfig, fmt_name: str):
    res, trace = run_branch(config)
    rows = []
    for s in trace.samples:
        approx = float(res(s.x))
        rows.append([s.x, s.lam, approx, abs(s.lam - approx), s.residual, s.newton_iters])
    if fmt_name == "csv":
        return _csv(BRANCH_COLUMNS, rows), EXIT_OK
    fitted = None
    if trace.fitted is not None:
        f = trace.fitted
        fitted = {"order": f.order, "a_hat": f.a_hat, "b_hat": f.b_hat,
                  "higher_hat": f.higher_hat, "remainder_slope": f.remainder_slope,
                  "slope_window": list(f.slope_window) if f.slope_window else None}
    return {"expansion": res.as_dict(),
            "samples": [dict(zip(BRANCH_COLUMNS, r)) for r in rows],
            "fitted": fitted}, EXIT_OK


def _verify(config: ScenarioConfig, fmt_name: str):
    results = run_battery(config)
    passed = all(r.ok for r in results)
    code = EXIT_OK if passed else EXIT_VERIFY
    if fmt_name == "csv":
        return _csv(["check", "status", "value", "threshold", "detail"],
                    [[r.name, r.status, r.value, r.threshold, r.detail]
                     for r in results]), code
    return {"passed": passed, "checks": [r.as_dict() for r in results]}, code


COMMANDS = {
    "coeffs": (_coeffs, "json"),
    "branch": (_branch, "csv"),
    "verify": (_verify, "json"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario JSON file")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--tol-root", type=float, default=None, dest="tol_root")
    common.add_argument("--tol-simple", type=float, default=None, dest="tol_simple")

    parser = argparse.ArgumentParser(
        prog="pointcontact",
        description="Weak-coupling eigenvalue expansions for point-contact models.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("coeffs", parents=[common], help="expansion coefficients")
    sub.add_parser("branch", parents=[common], help="tracked branch vs expansion (CSV)")
    sub.add_parser("verify", parents=[common], help="run the invariant battery")
    return parser


def _render(payload, fmt_name) -> str:
    if isinstance(payload, str):
        return payload
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run, default_fmt = COMMANDS[args.command]
    try:
        configs, batch = load_scenarios(args.config)
        overrides = {"root_tol": args.tol_root, "simple_tol": args.tol_simple}
        configs = [ScenarioConfig(**{**c.__dict__,
                                     "tolerances": c.tolerances.updated(**overrides)})
                   for c in configs]
        fmt_name = args.format or configs[0].output.get("format") or default_fmt
        if batch and fmt_name != "json":
            raise ConfigError("batch scenario files require --format json")
        out_path = args.out or configs[0].output.get("path")
    except PointContactError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)

    payloads, code = [], EXIT_OK
    for config in configs:
        try:
            payload, c = run(config, fmt_name)
        except PointContactError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return exit_code_for(exc)
        payloads.append(payload)
        code = max(code, c)
    text = _render(payloads if batch else payloads[0], fmt_name)
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    console_main()
