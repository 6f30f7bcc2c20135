"""Command line front end.

Exit codes: 0 when every executed check passes, 1 on violations or a failed
self-test, 2 on usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .blocks import (
    assemble,
    is_ppt,
    isometry_decompose,
    isometry_residual,
    two_term_decompose,
    two_term_residual,
)
from .classes import classify
from .errors import PPTMeansError, SuiteSelfTestFailure, UnknownCheck
from .jsonio import block_from_json, matrix_from_json, matrix_to_json
from .linalg import DEFAULT_TOL, Tolerance
from .verify.registry import REGISTRY
from .verify.runner import MAX_N, negative_controls, run_all, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "PPT_MEANS_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _add_common(p: argparse.ArgumentParser, *, suite: bool) -> None:
    p.add_argument("--atol", type=float, default=DEFAULT_TOL.atol)
    p.add_argument("--rtol", type=float, default=DEFAULT_TOL.rtol)
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "table"), default="json")
    if suite:
        p.add_argument("--n", type=int, default=3)
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
        p.add_argument("--t", type=float, default=None, help="fix a single weight t")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--timing", action="store_true", help="record wall_ms (breaks byte stability)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppt-means", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="run one registered check")
    p.add_argument("--id", required=True, dest="check_id")
    _add_common(p, suite=True)

    p = sub.add_parser("check-all", help="run every registered check")
    _add_common(p, suite=True)

    p = sub.add_parser("classify", help="classify a square matrix given as JSON")
    p.add_argument("path")
    _add_common(p, suite=False)

    p = sub.add_parser("decompose", help="two-term and isometry decompositions of a block")
    p.add_argument("path")
    p.add_argument("--t", type=float, default=0.5)
    _add_common(p, suite=False)

    p = sub.add_parser("controls", help="run the negative controls")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    _add_common(p, suite=False)
    return parser


def _tol(args) -> Tolerance:
    if not (args.atol >= 0 and args.rtol >= 0):
        raise UsageError("--atol and --rtol must be nonnegative")
    return Tolerance(args.atol, args.rtol)


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def _report_table(reports) -> str:
    lines = [f"{'check':<8} {'name':<22} {'trials':>6} {'skipped':>7} {'worst_margin':>13}  result"]
    for r in reports:
        name = REGISTRY[r.check_id].name if r.check_id in REGISTRY else r.check_id
        lines.append(
            f"{r.check_id:<8} {name:<22} {r.trials:>6} {r.skipped:>7} "
            f"{_fmt(r.worst_margin):>13}  {'pass' if r.passed else 'FAIL'}"
        )
    return "\n".join(lines)


def _dict_table(d: dict, prefix: str = "") -> str:
    lines = []
    for k, v in d.items():
        if isinstance(v, dict) and not {"re"} <= set(v):
            lines.append(_dict_table(v, f"{prefix}{k}."))
        elif isinstance(v, dict):
            lines.append(f"{prefix}{k}: <{len(v['re'])}x{len(v['re'][0])} matrix>")
        else:
            lines.append(f"{prefix}{k}: {v}")
    return "\n".join(lines)


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _suite_args(args):
    if not 1 <= args.n <= MAX_N:
        raise UsageError(f"--n must be in 1..{MAX_N}")
    if args.trials < 0:
        raise UsageError("--trials must be >= 0")
    if args.t is not None and not 0.0 <= args.t <= 1.0:
        raise UsageError("--t must lie in [0, 1]")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    seed = _default_seed() if args.seed is None else args.seed
    return seed, _tol(args)


def _cmd_check(args) -> int:
    seed, tol = _suite_args(args)
    try:
        report = run_check(args.check_id, args.n, args.trials, seed, tol,
                           t=args.t, jobs=args.jobs, timing=args.timing)
    except UnknownCheck:
        raise UsageError(f"unknown check id {args.check_id!r}; known: {', '.join(REGISTRY)}") from None
    text = _report_table([report]) if args.format == "table" else _dumps(report.to_dict())
    _emit(text, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_check_all(args) -> int:
    seed, tol = _suite_args(args)
    reports = run_all(args.n, args.trials, seed, tol, t=args.t, jobs=args.jobs, timing=args.timing)
    if args.format == "table":
        text = _report_table(reports)
    else:
        text = _dumps([r.to_dict() for r in reports])
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _cmd_classify(args) -> int:
    tol = _tol(args)
    t = matrix_from_json(_load_json(args.path))
    if t.shape[0] != t.shape[1]:
        raise UsageError("matrix: classify needs a square matrix")
    rec = classify(t, tol).to_dict()
    _emit(_dict_table(rec) if args.format == "table" else _dumps(rec), args.out)
    return EXIT_OK


def _cmd_decompose(args) -> int:
    tol = _tol(args)
    block = block_from_json(_load_json(args.path))
    m = assemble(block)
    parts = two_term_decompose(m)
    out = {
        "two_term": {
            "U": matrix_to_json(parts.U),
            "V": matrix_to_json(parts.V),
            "residual": two_term_residual(m, parts),
        }
    }
    ppt = is_ppt(block, tol)
    out["ppt"] = {"is_ppt": ppt.is_ppt, "margin": ppt.margin, "margin_pt": ppt.margin_pt}
    if ppt.is_ppt:
        pair = isometry_decompose(block, args.t)
        out["isometry"] = {
            "t": args.t,
            "U_tilde": matrix_to_json(pair.U_tilde),
            "V_tilde": matrix_to_json(pair.V_tilde),
            "residual": isometry_residual(block, args.t, pair),
        }
    else:
        out["isometry"] = None
    _emit(_dict_table(out) if args.format == "table" else _dumps(out), args.out)
    return EXIT_OK


def _cmd_controls(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    try:
        report = negative_controls(seed)
    except SuiteSelfTestFailure as exc:
        sys.stderr.write(f"ppt-means: {exc}\n")
        return EXIT_FAIL
    text = _report_table([report]) if args.format == "table" else _dumps(report.to_dict())
    _emit(text, args.out)
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "check-all": _cmd_check_all,
    "classify": _cmd_classify,
    "decompose": _cmd_decompose,
    "controls": _cmd_controls,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"ppt-means: error: {exc}\n")
        return EXIT_USAGE
    except PPTMeansError as exc:
        # malformed JSON fields, non-PSD blocks and the like are input errors
        sys.stderr.write(f"ppt-means: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
