"""Hot numeric kernels.

Two kernels dominate the verification suite's runtime: dense Hermitian
eigendecomposition of tiny matrices (called hundreds of thousands of times)
and the pivoted Cholesky positivity oracle. Each has a numba-compiled path and
a pure-numpy path. The numba path is used when numba imports and the
environment variable ``PPT_MEANS_DISABLE_NUMBA`` is unset (or ``0``).

The numpy eigen path delegates to LAPACK through ``numpy.linalg.eigh``; the
numba path is a cyclic complex Jacobi solver, which is faster than the LAPACK
wrapper for n <= 10 because it avoids per-call overhead; larger matrices go
to LAPACK on either backend.
"""

from __future__ import annotations

import contextlib
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_DISABLED = os.environ.get("PPT_MEANS_DISABLE_NUMBA", "0").strip().lower() not in (
    "",
    "0",
    "false",
    "no",
)

NUMBA_AVAILABLE = numba is not None

_JACOBI_MAX_SWEEPS = 60
# cyclic Jacobi is O(n^3) per sweep with poor locality; LAPACK wins past this size
JACOBI_MAX_N = 10


def _jacobi_eigh_py(a, max_sweeps):
    n = a.shape[0]
    a = a.copy()
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    for _ in range(max_sweeps):
        off = 0.0
        diag = 0.0
        for p in range(n):
            diag += a[p, p].real * a[p, p].real
            for q in range(p + 1, n):
                off += a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag
        if off <= 1e-32 * (diag + 2.0 * off) or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                e = apq / r
                ec = e.conjugate()
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = [[c, s*e], [-s*conj(e), c]] on (p, q); A <- J^H A J, V <- V J
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * ec * akq
                    a[k, q] = s * e * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * e * aqk
                    a[q, k] = s * ec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * ec * vkq
                    v[k, q] = s * e * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    # insertion sort, descending; columns of v follow
    for i in range(1, n):
        j = i
        while j > 0 and w[j - 1] < w[j]:
            tmp = w[j - 1]
            w[j - 1] = w[j]
            w[j] = tmp
            for k in range(n):
                tv = v[k, j - 1]
                v[k, j - 1] = v[k, j]
                v[k, j] = tv
            j -= 1
    return w, v


def _pivoted_cholesky_py(a):
    n = a.shape[0]
    a = a.copy()
    for k in range(n):
        piv = k
        best = a[k, k].real
        for i in range(k + 1, n):
            if a[i, i].real > best:
                best = a[i, i].real
                piv = i
        if not best > 0.0:
            return False
        if piv != k:
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[piv, j]
                a[piv, j] = tmp
            for i in range(n):
                tmp = a[i, k]
                a[i, k] = a[i, piv]
                a[i, piv] = tmp
        lkk = np.sqrt(best)
        for i in range(k + 1, n):
            a[i, k] = a[i, k] / lkk
        for j in range(k + 1, n):
            ljc = a[j, k].conjugate()
            for i in range(j, n):
                a[i, j] = a[i, j] - a[i, k] * ljc
            a[j, j] = a[j, j].real
    return True


if NUMBA_AVAILABLE:
    _jacobi_eigh_nb = numba.njit(cache=True, nogil=True)(_jacobi_eigh_py)
    _pivoted_cholesky_nb = numba.njit(cache=True, nogil=True)(_pivoted_cholesky_py)
else:  # pragma: no cover
    _jacobi_eigh_nb = None
    _pivoted_cholesky_nb = None


def _eigh_numpy(a):
    w, v = np.linalg.eigh(a)
    return w[::-1].copy(), v[:, ::-1].copy()


def _eigh_numba(a):
    return _jacobi_eigh_nb(a, _JACOBI_MAX_SWEEPS)


def _pivoted_cholesky_numpy(a):
    a = np.array(a, dtype=np.complex128, copy=True)
    n = a.shape[0]
    for k in range(n):
        d = a.diagonal().real[k:]
        piv = k + int(np.argmax(d))
        best = d[piv - k]
        if not best > 0.0:
            return False
        if piv != k:
            a[[k, piv], :] = a[[piv, k], :]
            a[:, [k, piv]] = a[:, [piv, k]]
        lkk = np.sqrt(best)
        col = a[k + 1 :, k] / lkk
        a[k + 1 :, k] = col
        a[k + 1 :, k + 1 :] -= np.outer(col, col.conj())
    return True


_BACKENDS = {
    "numpy": (_eigh_numpy, _pivoted_cholesky_numpy),
    "numba": (_eigh_numba, _pivoted_cholesky_nb),
}

_active = "numba" if (NUMBA_AVAILABLE and not _DISABLED) else "numpy"


def backend() -> str:
    """Name of the active kernel backend (``"numba"`` or ``"numpy"``)."""
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    _active = name


@contextlib.contextmanager
def use_backend(name: str):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def eigh_desc(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Raw Hermitian eigensolver; eigenvalues descending, no validation."""
    if _active == "numba" and a.shape[0] <= JACOBI_MAX_N:
        return _jacobi_eigh_nb(a, _JACOBI_MAX_SWEEPS)
    return _eigh_numpy(a)


def cholesky_pd(a: np.ndarray) -> bool:
    """True iff complete pivoting Cholesky of Hermitian ``a`` finds only positive pivots."""
    return bool(_BACKENDS[_active][1](a))
