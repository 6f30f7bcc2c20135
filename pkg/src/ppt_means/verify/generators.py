"""Seeded random instance families.

Every trial gets its own ``numpy`` generator keyed by ``(seed, trial)`` so a
trial's instance does not depend on which other trials ran or in which order.
Spectra are drawn log-uniformly over at most three decades, which keeps the
condition numbers of positive definite arguments below 1e3.
"""

from __future__ import annotations

import numpy as np

from ..blocks import PRECONDITION_TOL, Block2x2, is_ppt
from ..linalg import hermitian_part, psd_sqrt_and_invsqrt

_SEED_MASK = (1 << 64) - 1
# rejection sampling of genuinely non-Hermitian PPT blocks is only cheap for small n
REJECTION_MAX_N = 4
REJECTION_TRIES = 200
T_COND_CAP = 1e3


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & _SEED_MASK, trial]))


def complex_gaussian(rng, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def haar_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def log_spectrum(rng, n: int, lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    return 10.0 ** rng.uniform(lo, hi, size=n)


def random_pd(rng, n: int) -> np.ndarray:
    u = haar_unitary(rng, n)
    return hermitian_part((u * log_spectrum(rng, n, -1.5, 1.5)) @ u.conj().T)


def random_hermitian(rng, n: int) -> np.ndarray:
    return hermitian_part(complex_gaussian(rng, (n, n)))


def pd_pair(rng, n: int) -> dict:
    return {"A": random_pd(rng, n), "B": random_pd(rng, n)}


def psd_block(rng, n: int) -> dict:
    """Wishart-type PSD block ``G G^*`` plus a small ridge so ``A``, ``B`` are PD."""
    r = int(rng.integers(n, 2 * n + 1))
    g = complex_gaussian(rng, (2 * n, r))
    m = g @ g.conj().T / r + 10.0 ** rng.uniform(-2.0, -0.5) * np.eye(2 * n)
    m = 10.0 ** rng.uniform(-1.0, 1.0) * hermitian_part(m)
    return {"A": m[:n, :n], "X": m[n:, :n], "B": m[n:, n:]}


def hermitian_x_block(rng, n: int) -> dict:
    """PSD block with Hermitian off-diagonal part, hence PPT."""
    a = random_pd(rng, n)
    b = random_pd(rng, n)
    h = random_hermitian(rng, n)
    aih = psd_sqrt_and_invsqrt(a)[1]
    bih = psd_sqrt_and_invsqrt(b)[1]
    k = np.linalg.norm(aih @ h @ bih, 2)
    x = hermitian_part(rng.uniform(0.05, 1.0) * h / k)
    return {"A": a, "X": x, "B": b}


def separable_block(rng, n: int) -> dict:
    """Sum of product terms ``(u u^*) (x) (v v^*)`` with ``u`` in C^2; separable, so PPT."""
    m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    for _ in range(int(rng.integers(n, 2 * n + 2))):
        u = complex_gaussian(rng, 2)
        v = complex_gaussian(rng, n)
        m += np.kron(np.outer(u, u.conj()), np.outer(v, v.conj()))
    m += 10.0 ** rng.uniform(-2.0, -0.5) * np.eye(2 * n) * np.trace(m).real / (2 * n)
    m = 10.0 ** rng.uniform(-1.0, 1.0) * hermitian_part(m) / np.linalg.norm(m, 2)
    return {"A": m[:n, :n], "X": m[n:, :n], "B": m[n:, n:]}


def ppt_block(rng, n: int) -> dict:
    """Half Hermitian-X blocks, half non-Hermitian PPT blocks.

    Non-Hermitian blocks come from rejection sampling PSD blocks for
    ``n <= 4`` and from separable sums otherwise (or when rejection runs dry).
    """
    if rng.random() < 0.5:
        return hermitian_x_block(rng, n)
    if n <= REJECTION_MAX_N and rng.random() < 0.5:
        for _ in range(REJECTION_TRIES):
            inst = psd_block(rng, n)
            if is_ppt(Block2x2(**inst), PRECONDITION_TOL).is_ppt:
                return inst
    return separable_block(rng, n)


def general_matrix(rng, n: int) -> np.ndarray:
    return 10.0 ** rng.uniform(-0.5, 0.5) * complex_gaussian(rng, (n, n))


def normal_matrix(rng, n: int) -> np.ndarray:
    u = haar_unitary(rng, n)
    lam = log_spectrum(rng, n) * np.exp(2j * np.pi * rng.random(n))
    return (u * lam) @ u.conj().T


def general_t(rng, n: int) -> dict:
    return {"T": general_matrix(rng, n)}


def normal_or_general_t(rng, n: int) -> dict:
    if rng.random() < 0.5:
        return {"T": normal_matrix(rng, n)}
    return {"T": general_matrix(rng, n)}


def normal_pair(rng, n: int) -> dict:
    return {"A": normal_matrix(rng, n), "B": normal_matrix(rng, n)}


def invertible_t(rng, n: int) -> dict:
    """Well-conditioned invertible ``T``; it is (alpha, beta)-normal at its tight parameters."""
    if rng.random() < 0.5:
        w = haar_unitary(rng, n)
        z = haar_unitary(rng, n)
        return {"T": (w * log_spectrum(rng, n)) @ z.conj().T}
    t = general_matrix(rng, n)
    return {"T": t}


def random_t_weight(rng) -> float:
    return float(rng.random())


def triangle_exponents(rng) -> tuple[float, float]:
    """Uniform draw from ``{a, b in [0, 1], a + b >= 1}``."""
    a, b = rng.random(2)
    if a + b < 1.0:
        a, b = 1.0 - a, 1.0 - b
    return float(a), float(b)
