import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppt_means import (
    Compression,
    Congruence,
    InvalidInput,
    SumOfCongruences,
    Tolerance,
    TraceMap,
    ab_normal_blocks,
    abs_parts,
    classify,
    is_ab_normal,
    is_ppt,
    is_psd,
    positive_map_apply,
    semi_hypo_block_iff,
    tight_parameters,
)
from ppt_means.classes import pencil_eigenvalues
from ppt_means.verify.generators import (
    complex_gaussian,
    general_matrix,
    haar_unitary,
    invertible_t,
    normal_matrix,
    trial_rng,
)

from conftest import seeds

SHIFT = np.array([[0.0, 1.0], [0.0, 0.0]])
TIGHT = np.array([[0.0, 2.0], [1.0, 0.0]])
LOOSE = Tolerance(1e-8, 1e-8)


def test_abs_parts_examples():
    a, b = abs_parts(SHIFT)
    assert np.allclose(a, np.diag([0.0, 1.0])) and np.allclose(b, np.diag([1.0, 0.0]))
    a, b = abs_parts(TIGHT)
    assert np.allclose(a, np.diag([1.0, 2.0])) and np.allclose(b, np.diag([2.0, 1.0]))
    n = normal_matrix(np.random.default_rng(0), 3)
    a, b = abs_parts(n)
    assert np.allclose(a, b)


def test_classify_examples():
    rec = classify(TIGHT)
    assert abs(rec.alpha - 0.5) <= 1e-12 and abs(rec.beta - 2.0) <= 1e-12
    assert not rec.is_semi_hyponormal
    rec = classify(haar_unitary(np.random.default_rng(1), 4))
    assert rec.is_normal and rec.is_hyponormal and rec.is_semi_hyponormal
    assert rec.alpha == pytest.approx(1.0) and rec.beta == pytest.approx(1.0)
    rec = classify(SHIFT)
    assert not rec.is_semi_hyponormal
    assert rec.alpha is None and rec.beta is None
    assert rec.to_dict()["alpha"] is None


@given(seeds, st.integers(1, 5))
def test_pencil_invariants(seed, n):
    t = invertible_t(trial_rng(seed, 0), n)["T"]
    ev = pencil_eigenvalues(t)
    assert abs(np.prod(ev) - 1.0) <= 1e-9
    alpha, beta = tight_parameters(t)
    assert alpha <= 1 + 1e-12 <= beta + 2e-12
    assert is_ab_normal(t, alpha, beta)


@given(seeds, st.integers(1, 5))
def test_class_implications(seed, n):
    rng = trial_rng(seed, 0)
    t = normal_matrix(rng, n) if rng.random() < 0.5 else general_matrix(rng, n)
    rec = classify(t)
    assert (not rec.is_normal) or rec.is_hyponormal
    assert (not rec.is_hyponormal) or rec.is_semi_hyponormal
    lhs, rhs = semi_hypo_block_iff(t)
    assert lhs == rhs
    if rec.is_semi_hyponormal:
        # finite dimension: semi-hyponormal forces |T| = |T*|
        a, b = abs_parts(t)
        assert np.linalg.norm(a - b, 2) <= 1e-7 * (1 + np.linalg.norm(t, 2))


def test_semi_hypo_iff_examples():
    assert semi_hypo_block_iff(SHIFT) == (False, False)
    assert semi_hypo_block_iff(normal_matrix(np.random.default_rng(2), 3)) == (True, True)


def test_ab_blocks_tight_witness():
    for variant in ("squared", "linear", "schwarz"):
        assert all(b.psd for b in ab_normal_blocks(TIGHT, 0.5, 2.0, variant))
    labels = {b.label: b.psd for b in ab_normal_blocks(TIGHT, 0.9, 2.0, "squared")}
    assert not labels["schur_alpha"] and not labels["equal_alpha"]
    assert not is_ab_normal(TIGHT, 0.9, 2.0)
    u = haar_unitary(np.random.default_rng(5), 3)
    for variant in ("squared", "linear", "schwarz"):
        assert all(b.psd for b in ab_normal_blocks(u, 1.0, 1.0, variant))


def test_ab_blocks_errors():
    with pytest.raises(InvalidInput):
        ab_normal_blocks(TIGHT, 1.5, 2.0)
    with pytest.raises(InvalidInput):
        ab_normal_blocks(TIGHT, 0.5, 0.5)
    with pytest.raises(InvalidInput):
        ab_normal_blocks(TIGHT, 0.5, 2.0, "cubic")


@given(seeds, st.integers(1, 5))
def test_schwarz_blocks_are_ppt(seed, n):
    t = invertible_t(trial_rng(seed, 0), n)["T"]
    alpha, beta = tight_parameters(t)
    for lb in ab_normal_blocks(t, alpha, beta, "schwarz"):
        assert lb.psd
        assert is_ppt(lb.block, LOOSE).is_ppt


def _maps(rng, n):
    return [
        Congruence(complex_gaussian(rng, (n, n))),
        SumOfCongruences([complex_gaussian(rng, (n, n)) for _ in range(3)]),
        Compression(max(1, n - 1)),
        TraceMap(),
    ]


@given(seeds, st.integers(1, 5))
def test_positive_maps(seed, n):
    rng = trial_rng(seed, 0)
    g = complex_gaussian(rng, (n, n))
    psd = g.conj().T @ g
    x, y = general_matrix(rng, n), general_matrix(rng, n)
    for phi in _maps(rng, n):
        out = positive_map_apply(phi, psd)
        assert is_psd(out, LOOSE).holds
        assert np.allclose(phi(x.conj().T), phi(x).conj().T, atol=1e-12 * (1 + np.abs(x).max()) * n)
        assert np.allclose(phi(2 * x + y), 2 * phi(x) + phi(y), atol=1e-10 * n)


def test_positive_map_shape_errors():
    with pytest.raises(InvalidInput):
        positive_map_apply(Congruence(np.eye(3)), np.eye(2))
    with pytest.raises(InvalidInput):
        positive_map_apply(Compression(4), np.eye(2))
    with pytest.raises(InvalidInput):
        SumOfCongruences([np.eye(2), np.ones((2, 3))])(np.eye(2))
