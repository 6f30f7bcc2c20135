"""Weighted geometric means on the positive definite cone."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInput, SingularMatrix
from .linalg import (
    DEFAULT_TOL,
    PD_RTOL,
    Tolerance,
    as_hermitian,
    eigvals_desc,
    hermitian_part,
    is_psd,
    psd_power,
    psd_sqrt_and_invsqrt,
)

T_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


def check_weight(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidInput(f"weight t must lie in [0, 1], got {t}")
    return t


def require_pd(h: np.ndarray, name: str = "matrix") -> None:
    w = eigvals_desc(h)
    if not w[-1] > PD_RTOL * max(abs(w[0]), abs(w[-1])):
        raise SingularMatrix(f"{name} is not positive definite (lambda_min = {w[-1]:.3e})")


def gmean(a: np.ndarray, b: np.ndarray, t: float = 0.5) -> np.ndarray:
    """Unvalidated ``A #_t B`` for internal callers (A, B Hermitian PD)."""
    ah, aih = psd_sqrt_and_invsqrt(a)
    c = hermitian_part(aih @ b @ aih)
    return hermitian_part(ah @ psd_power(c, t) @ ah)


def geometric_mean_t(a, b, t: float = 0.5, *, eps: float = 0.0) -> np.ndarray:
    """Weighted geometric mean ``A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}``.

    Both arguments must be positive definite. With ``eps > 0`` the arguments
    are regularized to ``A + eps I`` and ``B + eps I`` first.
    """
    a = as_hermitian(a, name="A")
    b = as_hermitian(b, name="B")
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    t = check_weight(t)
    if eps:
        if eps < 0:
            raise InvalidInput("eps must be nonnegative")
        eye = np.eye(a.shape[0])
        a = a + eps * eye
        b = b + eps * eye
    require_pd(a, "A")
    require_pd(b, "B")
    return gmean(a, b, t)


def geometric_mean(a, b, *, eps: float = 0.0) -> np.ndarray:
    return geometric_mean_t(a, b, 0.5, eps=eps)


def check_max_characterization(a, b, z, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``[[A, Z], [Z, B]]`` is positive semidefinite.

    Every Hermitian ``Z`` passing this test satisfies ``Z <= A # B``.
    """
    a = as_hermitian(a, name="A")
    b = as_hermitian(b, name="B")
    z = as_hermitian(z, name="Z")
    if not a.shape == b.shape == z.shape:
        raise InvalidInput("A, B and Z must have equal shapes")
    return is_psd(np.block([[a, z], [z, b]]), tol).holds


def amgm_margin(a, b) -> float:
    """``lambda_min((A + B)/2 - A # B)``; nonnegative up to round-off."""
    g = geometric_mean(a, b)
    a = as_hermitian(a)
    b = as_hermitian(b)
    return float(eigvals_desc(hermitian_part(0.5 * (a + b) - g))[-1])
