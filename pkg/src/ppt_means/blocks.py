"""2x2 block matrices ``M = [[A, X^*], [X, B]]``.

A :class:`Block2x2` stores ``(A, X, B)``; the off-diagonal block ``X`` always
sits in the lower-left corner of the assembled matrix. The partial transpose
swaps ``X`` and ``X^*``, so a block is PPT when both ``[[A, X^*], [X, B]]`` and
``[[A, X], [X^*, B]]`` are positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import InvalidInput, PreconditionViolated
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    as_hermitian,
    as_matrix,
    eigvals_desc,
    hermitian_part,
    norm2,
    psd_sqrt_and_invsqrt,
)
from .means import check_weight, gmean, require_pd

# PPT/PSD hypotheses are checked more loosely than results are certified
PRECONDITION_TOL = Tolerance(1e-8, 1e-8)


@dataclass(frozen=True, eq=False)
class Block2x2:
    A: np.ndarray
    X: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        a = as_hermitian(self.A, name="A")
        b = as_hermitian(self.B, name="B")
        x = as_matrix(self.X, square=True, name="X")
        if not a.shape == b.shape == x.shape:
            raise InvalidInput(
                f"block shapes disagree: A {a.shape}, X {x.shape}, B {b.shape}"
            )
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "B", b)
        object.__setattr__(self, "X", x)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def from_matrix(cls, m) -> Block2x2:
        """Split a Hermitian 2n x 2n matrix into its blocks."""
        m = as_hermitian(m, name="M")
        if m.shape[0] % 2:
            raise InvalidInput(f"block matrix needs even size, got {m.shape[0]}")
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[n:, :n], m[n:, n:])


class PPTResult(NamedTuple):
    is_ppt: bool
    margin: float  # lambda_min of [[A, X^*], [X, B]]
    margin_pt: float  # lambda_min of the partial transpose


class IsometryPair(NamedTuple):
    U_tilde: np.ndarray
    V_tilde: np.ndarray


class TwoTerm(NamedTuple):
    U: np.ndarray
    V: np.ndarray


def _assemble(a: np.ndarray, x: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.block([[a, x.conj().T], [x, b]])


def assemble(block: Block2x2) -> np.ndarray:
    """The Hermitian ``2n x 2n`` matrix ``[[A, X^*], [X, B]]``."""
    return _assemble(block.A, block.X, block.B)


def partial_transpose(block: Block2x2) -> Block2x2:
    return Block2x2(block.A, block.X.conj().T, block.B)


def _lmin_scaled(m: np.ndarray) -> tuple[float, float]:
    w = eigvals_desc(m)
    return float(w[-1]), float(max(abs(w[0]), abs(w[-1])))


def is_ppt(block: Block2x2, tol: Tolerance = DEFAULT_TOL) -> PPTResult:
    m1, s1 = _lmin_scaled(assemble(block))
    m2, s2 = _lmin_scaled(_assemble(block.A, block.X.conj().T, block.B))
    ok = m1 >= -tol.threshold(s1) and m2 >= -tol.threshold(s2)
    return PPTResult(bool(ok), m1, m2)


def _require_ppt(block: Block2x2) -> None:
    res = is_ppt(block, PRECONDITION_TOL)
    if not res.is_ppt:
        raise PreconditionViolated(
            f"block is not PPT (margins {res.margin:.3e}, {res.margin_pt:.3e})"
        )


def mean_compress(block: Block2x2, t: float) -> Block2x2:
    """Replace the diagonal blocks by ``A #_t B`` and ``A #_{1-t} B``.

    The input must be PPT with ``A``, ``B`` positive definite; the output is
    then PPT again.
    """
    t = check_weight(t)
    require_pd(block.A, "A")
    require_pd(block.B, "B")
    _require_ppt(block)
    return Block2x2(gmean(block.A, block.B, t), block.X, gmean(block.A, block.B, 1.0 - t))


def _column_complement(q: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the columns of isometry ``q``."""
    full, _ = np.linalg.qr(q, mode="complete")
    return full[:, q.shape[1] :]


def _polar_isometry(c: np.ndarray) -> np.ndarray:
    w, _, zh = np.linalg.svd(c, full_matrices=False)
    return w @ zh


def two_term_decompose(m, tol: Tolerance = PRECONDITION_TOL) -> TwoTerm:
    """Unitaries ``U, V`` with ``M = U diag(A, 0) U^* + V diag(0, B) V^*``.

    ``A`` and ``B`` are the diagonal blocks of the PSD matrix ``M``. With
    ``T = M^{1/2} = [L | R]`` we have ``L^* L = A`` and ``M = L L^* + R R^*``;
    the polar isometry ``Q`` of ``L`` satisfies ``L L^* = Q A Q^*``, and ``U``
    is ``Q`` completed to a unitary (same for ``R``, ``B`` and ``V``).
    """
    m = as_hermitian(m, name="M")
    if m.shape[0] % 2:
        raise InvalidInput(f"block matrix needs even size, got {m.shape[0]}")
    n = m.shape[0] // 2
    w = eigvals_desc(m)
    if w[-1] < -tol.threshold(max(abs(w[0]), abs(w[-1]))):
        raise PreconditionViolated(f"M is not positive semidefinite (lambda_min = {w[-1]:.3e})")
    root = _psd_root_clamped(m)
    qu = _polar_isometry(root[:, :n])
    qv = _polar_isometry(root[:, n:])
    u = np.hstack([qu, _column_complement(qu)])
    v = np.hstack([_column_complement(qv), qv])
    return TwoTerm(u, v)


def _psd_root_clamped(m: np.ndarray) -> np.ndarray:
    w, v = _kernels.eigh_desc(np.ascontiguousarray(m))
    w = np.sqrt(np.clip(w, 0.0, None))
    return hermitian_part((v * w) @ v.conj().T)


def two_term_residual(m: np.ndarray, parts: TwoTerm) -> float:
    """Relative residual ``||M - U diag(A,0) U^* - V diag(0,B) V^*||_F / (1 + ||M||_F)``."""
    n = m.shape[0] // 2
    z = np.zeros((n, n))
    da = np.block([[m[:n, :n], z], [z, z]])
    db = np.block([[z, z], [z, m[n:, n:]]])
    u, v = parts
    rec = u @ da @ u.conj().T + v @ db @ v.conj().T
    return float(np.linalg.norm(rec - m) / (1.0 + np.linalg.norm(m)))


def isometry_decompose(block: Block2x2, t: float) -> IsometryPair:
    """Isometries for the mean-compressed block.

    With ``G_t = A #_t B`` the compressed matrix
    ``C = [[G_t, X^*], [X, G_{1-t}]]`` equals
    ``U~ G_t U~^* + V~ G_{1-t} V~^*`` for the returned ``2n x n`` isometries.
    """
    compressed = mean_compress(block, t)
    m = assemble(compressed)
    n = block.n
    u, v = two_term_decompose(m)
    return IsometryPair(u[:, :n], v[:, n:])


def isometry_residual(block: Block2x2, t: float, pair: IsometryPair) -> float:
    compressed = mean_compress(block, t)
    m = assemble(compressed)
    rec = pair.U_tilde @ compressed.A @ pair.U_tilde.conj().T
    rec = rec + pair.V_tilde @ compressed.B @ pair.V_tilde.conj().T
    return float(np.linalg.norm(rec - m) / (1.0 + np.linalg.norm(m)))


def ando_contraction(
    block: Block2x2, tol: Tolerance = PRECONDITION_TOL, *, pinv: bool = False
) -> np.ndarray:
    """Contraction ``K`` with top-right block ``X^* = A^{1/2} K B^{1/2}``.

    ``K = A^{-1/2} X^* B^{-1/2}``; a PSD block always gives ``||K|| <= 1``, so
    a larger norm is reported as :class:`PreconditionViolated`. ``pinv=True``
    uses Moore-Penrose inverse square roots for singular diagonal blocks.
    """
    if pinv:
        aih = _pinv_sqrt(block.A)
        bih = _pinv_sqrt(block.B)
    else:
        require_pd(block.A, "A")
        require_pd(block.B, "B")
        aih = psd_sqrt_and_invsqrt(block.A)[1]
        bih = psd_sqrt_and_invsqrt(block.B)[1]
    k = aih @ block.X.conj().T @ bih
    nk = norm2(k)
    if nk > 1.0 + tol.threshold(1.0):
        raise PreconditionViolated(f"block is not PSD: ||K|| = {nk:.12g} > 1")
    return k


def _pinv_sqrt(h: np.ndarray) -> np.ndarray:
    w, v = _kernels.eigh_desc(np.ascontiguousarray(h))
    cut = 1e-10 * max(abs(w[0]), abs(w[-1]), 0.0)
    f = np.where(w > cut, 1.0 / np.sqrt(np.where(w > cut, w, 1.0)), 0.0)
    return hermitian_part((v * f) @ v.conj().T)
