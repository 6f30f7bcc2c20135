"""Run registered checks and collect reports.

A trial is a pure function of ``(check id, n, seed, trial index, tol, t)``:
it draws its instance from its own RNG stream, so reports do not depend on
``jobs`` or on which trials ran before it.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..blocks import Block2x2, is_ppt
from ..errors import PPTMeansError, SuiteSelfTestFailure, UnknownCheck
from ..jsonio import matrix_to_json
from ..linalg import DEFAULT_TOL, Tolerance
from ..means import T_GRID, check_weight
from . import generators as gen
from .registry import HYPOTHESES, REGISTRY, Context, s_norm_square_reverse

MAX_N = 8
MAX_RETRIES = 20


@dataclass
class CheckReport:
    check_id: str
    n: int
    trials: int
    seed: int
    tol: Tolerance
    worst_margin: float | None
    violations: list[dict] = field(default_factory=list)
    skipped: int = 0
    wall_ms: float | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "tol": {"atol": self.tol.atol, "rtol": self.tol.rtol},
            "worst_margin": self.worst_margin,
            "passed": self.passed,
            "skipped": self.skipped,
            "violations": self.violations,
            "wall_ms": self.wall_ms,
        }


def _instance_json(inst: dict) -> dict:
    return {k: matrix_to_json(v) for k, v in sorted(inst.items())}


def instance_digest(inst: dict) -> str:
    h = hashlib.sha256()
    for k in sorted(inst):
        a = np.ascontiguousarray(inst[k], dtype=np.complex128)
        h.update(k.encode())
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


def _t_values(rng, t: float | None) -> tuple[float, ...]:
    if t is not None:
        return (t,)
    return T_GRID + (gen.random_t_weight(rng),)


def _generate(spec, rng, n: int):
    certify = HYPOTHESES[spec.hypothesis]
    for _ in range(MAX_RETRIES):
        inst = spec.generator(rng, n)
        if certify(inst):
            return inst
    return None


def _run_trial(check_id, n, seed, trial, tol, t, instance=None):
    """Returns ``(trial, margin, worst_label, instance)`` or ``None`` if skipped."""
    spec = REGISTRY[check_id]
    rng = gen.trial_rng(seed, trial)
    if instance is None:
        inst = _generate(spec, rng, n)
    else:
        inst = instance if HYPOTHESES[spec.hypothesis](instance) else None
    if inst is None:
        return None
    ctx = Context(tol, _t_values(rng, t), rng)
    try:
        subs = spec.statement(inst, ctx)
    except PPTMeansError:
        return None
    worst = min(subs, key=lambda s: s.margin / max(1.0, s.scale))
    return trial, worst.margin / max(1.0, worst.scale), worst.label, inst


def _trial_batch(args):
    check_id, n, seed, trials, tol, t = args
    return [_run_trial(check_id, n, seed, k, tol, t) for k in trials]


def _check_args(check_id: str, n: int, trials: int) -> None:
    if check_id not in REGISTRY:
        raise UnknownCheck(check_id)
    if not (isinstance(n, (int, np.integer)) and 1 <= n <= MAX_N):
        raise ValueError(f"n must be an integer in 1..{MAX_N}, got {n!r}")
    if trials < 0:
        raise ValueError(f"trials must be >= 0, got {trials}")


def run_check(
    check_id: str,
    n: int,
    trials: int,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    *,
    t: float | None = None,
    instance: dict | None = None,
    jobs: int = 1,
    timing: bool = False,
) -> CheckReport:
    """Run ``trials`` randomized trials of one check.

    ``instance`` replaces the generator with a fixed instance (every trial then
    sees the same matrices). ``t`` fixes the weight instead of using the grid
    plus one random weight per trial. ``wall_ms`` is only filled in when
    ``timing`` is set, so that reports stay byte-stable by default.
    """
    _check_args(check_id, n, trials)
    if t is not None:
        t = check_weight(t)
    if instance is not None:
        instance = {k: np.asarray(v, dtype=np.complex128) for k, v in instance.items()}
    start = time.perf_counter()

    if jobs > 1 and instance is None and trials > 1:
        chunks = [range(k, trials, jobs) for k in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            batches = pool.map(_trial_batch, [(check_id, n, seed, c, tol, t) for c in chunks])
            results = [r for b in batches for r in b]
    else:
        results = [_run_trial(check_id, n, seed, k, tol, t, instance) for k in range(trials)]

    done = sorted((r for r in results if r is not None), key=lambda r: r[0])
    threshold = tol.atol + tol.rtol
    violations = [
        {
            "trial": k,
            "margin": m,
            "label": label,
            "digest": instance_digest(inst),
            "instance": _instance_json(inst),
        }
        for k, m, label, inst in done
        if m < -threshold
    ]
    worst = min((r[1] for r in done), default=None)
    wall = (time.perf_counter() - start) * 1e3 if timing else None
    return CheckReport(
        check_id, int(n), int(trials), int(seed), tol, worst, violations,
        skipped=len(results) - len(done), wall_ms=wall,
    )


def run_all(
    n: int,
    trials: int,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    *,
    t: float | None = None,
    jobs: int = 1,
    timing: bool = False,
) -> list[CheckReport]:
    if trials == 0:
        return []
    return [
        run_check(cid, n, trials, seed, tol, t=t, jobs=jobs, timing=timing)
        for cid in REGISTRY
    ]


# negative controls ---------------------------------------------------------


def bell_block() -> Block2x2:
    """Projector onto ``(e0 (x) e0 + e1 (x) e1)/sqrt(2)``: PSD but not PPT."""
    psi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    m = np.outer(psi, psi)
    return Block2x2(m[:2, :2], m[2:, :2], m[2:, 2:])


SHIFT = np.array([[0.0, 1.0], [0.0, 0.0]])
TIGHT_T = np.array([[0.0, 2.0], [1.0, 0.0]])
CONTROL_SAMPLES = 200


def negative_controls(seed: int = 0) -> CheckReport:
    """Confirm the suite can tell a false statement from a true one.

    Each control carries a margin that is nonnegative when the control behaves
    as expected. Raises :class:`SuiteSelfTestFailure` if any control fails.
    """
    from ..classes import semi_hypo_block_iff

    results = []

    pt = is_ppt(bell_block())
    results.append(("bell_not_ppt", 1e-12 - abs(pt.margin_pt + 0.5), {"margin_pt": pt.margin_pt}))

    lhs, rhs = semi_hypo_block_iff(SHIFT)
    results.append(("shift_not_semi_hyponormal", 0.0 if (lhs, rhs) == (False, False) else -1.0,
                    {"block_psd": lhs, "semi_hyponormal": rhs}))

    ctx = Context(DEFAULT_TOL, (0.5,), gen.trial_rng(seed, 0))
    c23 = s_norm_square_reverse({"T": TIGHT_T}, ctx)[0]
    results.append(("c23_equality", 1e-10 - abs(c23.margin), {"margin": c23.margin}))

    found = 0
    for k in range(CONTROL_SAMPLES):
        inst = gen.psd_block(gen.trial_rng(seed, k), 3)
        found += not is_ppt(Block2x2(**inst)).is_ppt
    results.append(("psd_sampler_reaches_non_ppt", float(found > 0) - 0.5, {"non_ppt": found}))

    violations = [
        {"trial": k, "margin": m, "label": label, "details": details}
        for k, (label, m, details) in enumerate(results)
        if m < 0
    ]
    report = CheckReport(
        "controls", 3, len(results), int(seed), DEFAULT_TOL,
        min(m for _, m, _ in results), violations,
    )
    if violations:
        raise SuiteSelfTestFailure(
            "negative controls failed: " + ", ".join(v["label"] for v in violations)
        )
    return report
