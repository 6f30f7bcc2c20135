"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. A "Hermitian
matrix" is any array accepted by :func:`as_hermitian`, which symmetrizes it
exactly so that ``A[i, j] == conj(A[j, i])`` holds bitwise afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import InvalidInput, SingularMatrix

# relative tolerance used to accept slightly non-Hermitian input before symmetrizing
_HERM_INPUT_RTOL = 1e-8
# eigenvalues in (-CLAMP_RTOL * ||A||, 0) are round-off and get clamped before powers
CLAMP_RTOL = 1e-10
# lambda_min > PD_RTOL * ||A|| is required wherever a positive definite argument is needed
PD_RTOL = 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Mixed absolute/relative tolerance ``atol + rtol * scale``."""

    atol: float = 1e-9
    rtol: float = 1e-9

    def __post_init__(self):
        if not (self.atol >= 0 and self.rtol >= 0):
            raise InvalidInput(f"tolerances must be nonnegative, got {self}")

    def threshold(self, scale: float) -> float:
        return self.atol + self.rtol * abs(scale)


DEFAULT_TOL = Tolerance()


class EigenSystem(NamedTuple):
    values: np.ndarray  # real, descending
    vectors: np.ndarray  # unitary, columns are eigenvectors


class OrderResult(NamedTuple):
    holds: bool
    margin: float


class PolarParts(NamedTuple):
    U: np.ndarray
    P: np.ndarray


def as_matrix(x, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a 2-D finite ``complex128`` array."""
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise InvalidInput(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput(f"{name} has non-finite entries")
    return a


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def as_hermitian(x, *, name: str = "matrix") -> np.ndarray:
    """Validate a (numerically) Hermitian matrix and symmetrize it exactly."""
    a = as_matrix(x, square=True, name=name)
    dev = np.max(np.abs(a - a.conj().T))
    if dev > _HERM_INPUT_RTOL * (1.0 + np.max(np.abs(a))):
        raise InvalidInput(f"{name} is not Hermitian (deviation {dev:.3e})")
    return hermitian_part(a)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Phase of each column chosen so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, pivots / np.where(mags > 0, mags, 1.0), 1.0)
    return phases


def herm_eig(a) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.

    Eigenvector phases are normalized (largest-magnitude entry real positive)
    so the output is deterministic for simple eigenvalues.
    """
    h = as_hermitian(a)
    return _eig(h)


def _eig(h: np.ndarray) -> EigenSystem:
    w, v = _kernels.eigh_desc(np.ascontiguousarray(h))
    v = v * _fix_phases(v).conj()
    return EigenSystem(w, v)


def eigvals_desc(h: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of an already-Hermitian array (no validation)."""
    return _kernels.eigh_desc(np.ascontiguousarray(h))[0]


def lambda_min(h: np.ndarray) -> float:
    return float(eigvals_desc(h)[-1])


def _power_from_eig(w: np.ndarray, v: np.ndarray, t: float) -> np.ndarray:
    scale = np.max(np.abs(w)) if w.size else 0.0
    neg = w < 0
    if np.any(w < -CLAMP_RTOL * scale):
        raise InvalidInput(
            f"matrix is not positive semidefinite (lambda_min = {w.min():.3e})"
        )
    w = np.where(neg, 0.0, w)
    if t < 0:
        if w.min() <= PD_RTOL * scale:
            raise SingularMatrix(
                f"negative power of a singular matrix (lambda_min = {w.min():.3e})"
            )
        f = w**t
    elif t == 0:
        f = np.ones_like(w)
    else:
        f = w**t
    return hermitian_part((v * f) @ v.conj().T)


def mat_pow(a, t: float) -> np.ndarray:
    """``A**t`` for positive semidefinite ``A`` via the spectral theorem.

    Round-off negative eigenvalues (above ``-1e-10 * ||A||``) are clamped to
    zero. ``t = 0`` gives the identity even for singular ``A``. Negative ``t``
    needs ``A`` positive definite and raises :class:`SingularMatrix` otherwise.
    """
    h = as_hermitian(a)
    w, v = _eig(h)
    return _power_from_eig(w, v, float(t))


def psd_power(h: np.ndarray, t: float) -> np.ndarray:
    """Unvalidated fast path of :func:`mat_pow` for internal callers."""
    w, v = _kernels.eigh_desc(np.ascontiguousarray(h))
    return _power_from_eig(w, v, t)


def psd_sqrt_and_invsqrt(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = _kernels.eigh_desc(np.ascontiguousarray(h))
    return _power_from_eig(w, v, 0.5), _power_from_eig(w, v, -0.5)


def _order(diff: np.ndarray, tol: Tolerance, scale: float | None) -> OrderResult:
    w = eigvals_desc(diff)
    margin = float(w[-1])
    if scale is None:
        scale = float(max(abs(w[0]), abs(w[-1])))
    return OrderResult(margin >= -tol.threshold(scale), margin)


def loewner_leq(a, b, tol: Tolerance = DEFAULT_TOL, *, scale: float | None = None) -> OrderResult:
    """Decide ``A <= B`` in the Loewner order.

    ``holds`` is ``lambda_min(B - A) >= -(atol + rtol * scale)`` where ``scale``
    defaults to ``||B - A||``; ``margin`` is ``lambda_min(B - A)``.
    """
    a = as_hermitian(a, name="A")
    b = as_hermitian(b, name="B")
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    return _order(b - a, tol, scale)


def is_psd(a, tol: Tolerance = DEFAULT_TOL, *, scale: float | None = None) -> OrderResult:
    return _order(as_hermitian(a), tol, scale)


def _svd_raw(x: np.ndarray):
    w, s, zh = np.linalg.svd(x)
    z = zh.conj().T
    ph = _fix_phases(w)
    return w * ph.conj(), s, z * ph.conj()


def svd(x) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``X = W @ diag(s) @ Z^*`` with deterministic singular-vector phases.

    Each left singular vector's largest-magnitude entry is made real positive;
    the paired right vector is rotated by the same phase.
    """
    return _svd_raw(as_matrix(x))


def op_norm(x) -> float:
    """Operator (spectral) norm, the largest singular value."""
    return float(np.linalg.norm(as_matrix(x), 2))


def spectral_radius(x) -> float:
    a = as_matrix(x, square=True)
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def polar(x) -> PolarParts:
    """Polar decomposition ``X = U P`` with ``U`` unitary and ``P = |X|``.

    Built from the SVD as ``U = W Z^*``, which also completes the unitary on
    the kernel when ``X`` is singular. The zero matrix gets ``U = I``.
    """
    a = as_matrix(x, square=True)
    return _polar_raw(a)


def _polar_raw(a: np.ndarray) -> PolarParts:
    n = a.shape[0]
    w, s, z = _svd_raw(a)
    if not np.any(s > 0):
        return PolarParts(np.eye(n, dtype=np.complex128), np.zeros((n, n), dtype=np.complex128))
    u = w @ z.conj().T
    p = hermitian_part((z * s) @ z.conj().T)
    return PolarParts(u, p)


def abs_pair(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(|T|, |T^*|, U)`` from one SVD; ``U`` is the polar unitary of ``T``."""
    n = a.shape[0]
    w, s, z = _svd_raw(a)
    if not np.any(s > 0):
        zero = np.zeros((n, n), dtype=np.complex128)
        return zero, zero.copy(), np.eye(n, dtype=np.complex128)
    abs_t = hermitian_part((z * s) @ z.conj().T)
    abs_ts = hermitian_part((w * s) @ w.conj().T)
    return abs_t, abs_ts, w @ z.conj().T


def norm2(a: np.ndarray) -> float:
    """Unvalidated operator norm for internal callers."""
    return float(np.linalg.norm(a, 2))


def herm_norm(h: np.ndarray) -> float:
    """Operator norm of an already-Hermitian array via its extreme eigenvalues."""
    w = eigvals_desc(h)
    return float(max(abs(w[0]), abs(w[-1])))
