"""Acceptance criteria, one test per criterion.

Each test prints a single ``[criterion k] PASS|FAIL ...`` line; the lines are
collected again in the terminal summary (see conftest).
"""

import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from ppt_means import Block2x2, geometric_mean, geometric_mean_t, is_ppt, is_psd, tight_parameters
from ppt_means import _kernels
from ppt_means.blocks import (
    isometry_decompose,
    isometry_residual,
    two_term_decompose,
    two_term_residual,
    assemble,
)
from ppt_means.classes import semi_hypo_block_iff
from ppt_means.cli import main
from ppt_means.linalg import DEFAULT_TOL
from ppt_means.verify import negative_controls, run_check
from ppt_means.verify import generators as gen
from ppt_means.verify.registry import Context, s_mixed_schwarz
from ppt_means.verify.runner import SHIFT, TIGHT_T, bell_block

RESULTS: list[str] = []
SUITE_ARGS = ["check-all", "--n", "3", "--trials", "500", "--seed", "42",
              "--atol", "1e-9", "--rtol", "1e-9"]


def record(k: int, ok: bool, detail: str) -> None:
    line = f"[criterion {k}] {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)


@pytest.fixture(scope="module")
def suite_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite") / "run1.json"
    start = time.perf_counter()
    code = main(SUITE_ARGS + ["--out", str(out)])
    elapsed = time.perf_counter() - start
    return code, out, elapsed


def test_criterion_1_full_suite(suite_run):
    code, out, elapsed = suite_run
    reports = json.loads(out.read_text())
    failing = {r["check_id"]: len(r["violations"]) for r in reports if r["violations"]}
    ok = len(reports) == 24 and not failing and elapsed < 60.0
    record(1, ok, f"24 checks n=3 trials=500 seed=42: violations={failing or 'none'} "
                  f"runtime={elapsed:.1f}s exit={code}")
    assert len(reports) == 24
    assert elapsed < 60.0
    assert not failing, f"violations in {failing}"


def test_criterion_2_psd_oracle():
    rng = np.random.default_rng(2024)
    agree = compared = 0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        u = gen.haar_unitary(rng, n)
        w = rng.uniform(-3.0, 3.0, n)
        # push the smallest eigenvalue near the decision boundary half the time
        if rng.random() < 0.5:
            w[0] = rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-12, -3)
        a = (u * w) @ u.conj().T
        a = 0.5 * (a + a.conj().T)
        scale = float(np.linalg.norm(a, 2))
        threshold = DEFAULT_TOL.threshold(scale)
        if abs(w.min() + threshold) <= 1e-9:
            continue
        ours = is_psd(a).holds
        # is_psd(A) is lambda_min(A) >= -threshold, i.e. A + threshold*I is PSD;
        # pivoted Cholesky certifies that without an eigensolver
        with _kernels.use_backend("numpy"):
            oracle = _kernels.cholesky_pd(a + threshold * np.eye(n))
        compared += 1
        agree += ours == oracle
    ok = agree == compared and compared > 0
    record(2, ok, f"is_psd vs pivoted Cholesky: {agree}/{compared} agree outside dead band")
    assert ok


def _rel(x, ref):
    return float(np.linalg.norm(x - ref) / np.linalg.norm(ref))


def test_criterion_3_geometric_mean_oracle():
    rng = np.random.default_rng(33)
    worst = {"riccati": 0.0, "symmetry": 0.0, "endpoint": 0.0, "congruence": 0.0}
    for _ in range(200):
        n = int(rng.integers(1, 6))
        a, b = gen.random_pd(rng, n), gen.random_pd(rng, n)
        z = geometric_mean(a, b)
        worst["riccati"] = max(worst["riccati"], _rel(z @ np.linalg.solve(a, z), b))
        worst["symmetry"] = max(worst["symmetry"], _rel(geometric_mean(b, a), z))
        worst["endpoint"] = max(worst["endpoint"], _rel(geometric_mean_t(a, b, 0.0), a),
                                _rel(geometric_mean_t(a, b, 1.0), b))
        m = gen.haar_unitary(rng, n) * gen.log_spectrum(rng, n, -0.5, 0.5)
        lhs = geometric_mean(m @ a @ m.conj().T, m @ b @ m.conj().T)
        worst["congruence"] = max(worst["congruence"], _rel(lhs, m @ z @ m.conj().T))
    ok = worst["riccati"] <= 1e-8 and all(worst[k] <= 1e-10 for k in ("symmetry", "endpoint", "congruence"))
    record(3, ok, "worst relative errors " + ", ".join(f"{k}={v:.1e}" for k, v in worst.items()))
    assert ok


def test_criterion_4_constructive_decompositions():
    rng = np.random.default_rng(44)
    res_iso = res_tt = 0.0
    defect_ok = True
    for _ in range(200):
        n = int(rng.integers(1, 6))
        blk = Block2x2(**gen.ppt_block(rng, n))
        t = float(rng.random())
        pair = isometry_decompose(blk, t)
        res_iso = max(res_iso, isometry_residual(blk, t, pair))
        for q in pair:
            defect_ok &= np.linalg.norm(q.conj().T @ q - np.eye(n), 2) <= 1e-10 * n

        m = assemble(Block2x2(**gen.psd_block(rng, n)))
        parts = two_term_decompose(m)
        res_tt = max(res_tt, two_term_residual(m, parts))
        for q in parts:
            defect_ok &= np.linalg.norm(q.conj().T @ q - np.eye(2 * n), 2) <= 1e-10 * n
    ok = res_iso <= 1e-9 and res_tt <= 1e-9 and bool(defect_ok)
    record(4, ok, f"isometry residual {res_iso:.1e}, two-term residual {res_tt:.1e}, "
                  f"defects within 1e-10*n: {bool(defect_ok)}")
    assert ok


def test_criterion_5_tightness_witnesses():
    alpha, beta = tight_parameters(TIGHT_T)
    c23 = run_check("C23", 2, 1, seed=0, instance={"T": TIGHT_T}).worst_margin
    rng = np.random.default_rng(0)
    eq = s_mixed_schwarz({"T": TIGHT_T.astype(complex)}, Context(DEFAULT_TOL, (0.5,), rng))[-1]
    ok = (abs(alpha - 0.5) <= 1e-12 and abs(beta - 2.0) <= 1e-12
          and abs(c23) <= 1e-10 and abs(eq.margin) <= 1e-10)
    record(5, ok, f"alpha={alpha!r} beta={beta!r} C23 margin={c23:.1e} C13 equality gap={eq.margin:.1e}")
    assert ok


def test_criterion_6_negative_controls():
    pt = is_ppt(bell_block())
    bell_ok = (not pt.is_ppt) and abs(pt.margin_pt + 0.5) <= 1e-12
    shift_ok = semi_hypo_block_iff(SHIFT) == (False, False)
    agree = 0
    for k in range(500):
        rng = gen.trial_rng(66, k)
        t = gen.normal_or_general_t(rng, int(rng.integers(1, 6)))["T"]
        lhs, rhs = semi_hypo_block_iff(t)
        agree += lhs == rhs
    negative_controls(6)
    ok = bell_ok and shift_ok and agree == 500
    record(6, ok, f"Bell PT eigenvalue {pt.margin_pt:.15f}, shift flagged: {shift_ok}, "
                  f"iff agreement {agree}/500")
    assert ok


def test_criterion_7_eigenvalue_forms():
    worst = {}
    for cid in ("C8", "C20"):
        r = run_check(cid, 3, 500, seed=77)
        worst[cid] = (r.worst_margin, r.skipped)
    ok = all(m >= -1e-8 and s == 0 for m, s in worst.values())
    record(7, ok, ", ".join(f"{c} worst margin {m:.2e} (skipped {s})" for c, (m, s) in worst.items()))
    assert ok


def test_criterion_8_determinism(suite_run, tmp_path):
    _, out1, _ = suite_run
    out2 = tmp_path / "run2.json"
    env = dict(os.environ)
    env.pop("PPT_MEANS_SEED", None)
    subprocess.run([sys.executable, "-m", "ppt_means", *SUITE_ARGS, "--out", str(out2)],
                   env=env, check=False)
    same = out1.read_bytes() == out2.read_bytes()
    record(8, same, f"two executions of the criterion 1 command byte-identical: {same}")
    assert same
