"""Normal, hyponormal, semi-hyponormal and (alpha, beta)-normal matrices.

``T`` is hyponormal when ``|T^*|^2 <= |T|^2``, semi-hyponormal when
``|T^*| <= |T|`` and (alpha, beta)-normal when
``alpha^2 |T|^2 <= |T^*|^2 <= beta^2 |T|^2``. In finite dimension
``tr |T| = tr |T^*|``, so the first two classes both collapse to the normal
matrices; every invertible matrix is (alpha, beta)-normal for the extreme
eigenvalues of the pencil ``(|T^*|^2, |T|^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .blocks import Block2x2, assemble
from .errors import InvalidInput
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    _svd_raw,
    abs_pair,
    as_matrix,
    eigvals_desc,
    hermitian_part,
)


@dataclass
class ClassificationRecord:
    is_normal: bool
    is_hyponormal: bool
    is_semi_hyponormal: bool
    alpha: float | None
    beta: float | None
    margins: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "is_normal": self.is_normal,
            "is_hyponormal": self.is_hyponormal,
            "is_semi_hyponormal": self.is_semi_hyponormal,
            "alpha": self.alpha,
            "beta": self.beta,
            "margins": dict(self.margins),
        }


class LabeledBlock(NamedTuple):
    label: str
    block: Block2x2
    psd: bool
    margin: float


def abs_parts(t) -> tuple[np.ndarray, np.ndarray]:
    """``(|T|, |T^*|)`` with ``|T| = (T^* T)^{1/2}`` and ``|T^*| = (T T^*)^{1/2}``."""
    a = as_matrix(t, square=True, name="T")
    abs_t, abs_ts, _ = abs_pair(a)
    return abs_t, abs_ts


def _lmin_and_scale(h: np.ndarray) -> tuple[float, float]:
    w = eigvals_desc(h)
    return float(w[-1]), float(max(abs(w[0]), abs(w[-1])))


def pencil_eigenvalues(t) -> np.ndarray | None:
    """Eigenvalues (descending) of ``|T|^{-1} |T^*|^2 |T|^{-1}``; ``None`` if ``T`` is singular."""
    return _pencil(as_matrix(t, square=True, name="T"), DEFAULT_TOL)


def _pencil(a: np.ndarray, tol: Tolerance) -> np.ndarray | None:
    w, s, z = _svd_raw(a)
    if s[-1] <= tol.threshold(s[0]):
        return None
    # |T|^{-1} |T*|^2 |T|^{-1} = C^* C with C = |T*| |T|^{-1}, unitarily similar to
    # S (W^* Z) S^{-1}; its singular values avoid squaring the conditioning
    c = (s[:, None] * (w.conj().T @ z)) / s[None, :]
    return np.linalg.svd(c, compute_uv=False) ** 2


def tight_parameters(t, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float] | None:
    """Largest alpha and smallest beta for which ``T`` is (alpha, beta)-normal; ``None`` if singular."""
    ev = _pencil(as_matrix(t, square=True, name="T"), tol)
    if ev is None:
        return None
    return float(np.sqrt(max(ev[-1], 0.0))), float(np.sqrt(max(ev[0], 0.0)))


def classify(t, tol: Tolerance = DEFAULT_TOL) -> ClassificationRecord:
    a = as_matrix(t, square=True, name="T")
    abs_t, abs_ts, _ = abs_pair(a)
    sq = hermitian_part(a.conj().T @ a)
    sq_star = hermitian_part(a @ a.conj().T)

    comm = sq - sq_star
    comm_norm = float(np.linalg.norm(comm, 2))
    normal_scale = float(np.linalg.norm(sq, 2))
    is_normal = comm_norm <= tol.threshold(normal_scale)

    hypo_margin, hypo_scale = _lmin_and_scale(comm)
    semi_margin, semi_scale = _lmin_and_scale(abs_t - abs_ts)
    hypo = hypo_margin >= -tol.threshold(max(hypo_scale, normal_scale))
    semi = semi_margin >= -tol.threshold(max(semi_scale, float(np.linalg.norm(abs_t, 2))))
    # normal => hyponormal => semi-hyponormal hold exactly; the square root is not
    # Lipschitz at 0 so the weaker test alone can miss near-singular near-normal T
    hypo = hypo or is_normal
    semi = semi or hypo

    margins = {
        "normal": -comm_norm,
        "hyponormal": hypo_margin,
        "semi_hyponormal": semi_margin,
    }
    ev = _pencil(a, tol)
    alpha = beta = None
    if ev is not None:
        alpha = float(np.sqrt(max(ev[-1], 0.0)))
        beta = float(np.sqrt(max(ev[0], 0.0)))
        margins["pencil_det"] = float(np.prod(ev))
    return ClassificationRecord(is_normal, hypo, semi, alpha, beta, margins)


def semi_hypo_block(t) -> Block2x2:
    """``[[|T|, T^*], [T, |T|]]``."""
    a = as_matrix(t, square=True, name="T")
    abs_t, _, _ = abs_pair(a)
    return Block2x2(abs_t, a, abs_t)


def semi_hypo_block_iff(t, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, bool]:
    """``(block PSD, T semi-hyponormal)``; the two must agree."""
    blk = assemble(semi_hypo_block(t))
    m, s = _lmin_and_scale(blk)
    lhs = m >= -tol.threshold(s)
    return bool(lhs), classify(t, tol).is_semi_hyponormal


def _labeled(label: str, a, x, b, tol: Tolerance) -> LabeledBlock:
    blk = Block2x2(a, x, b)
    m, s = _lmin_and_scale(assemble(blk))
    return LabeledBlock(label, blk, bool(m >= -tol.threshold(s)), m)


VARIANTS = ("squared", "linear", "schwarz")


def ab_normal_blocks(
    t, alpha: float, beta: float, variant: str = "squared", tol: Tolerance = DEFAULT_TOL
) -> list[LabeledBlock]:
    """Block matrices whose positivity characterizes or follows from (alpha, beta)-normality.

    ``squared``: the Schur-complement pair ``[[|T*|^2/a, |T|^2], [|T|^2, |T|^2/a]]``,
    ``[[b|T|^2, |T*|^2], [|T*|^2, b|T*|^2]]`` followed by the pair with ``1/a^2``
    and ``b^2`` on equal diagonals. ``linear``: ``[[|T*|/sqrt(a), |T|], [|T|, |T|/sqrt(a)]]``
    and ``[[sqrt(b)|T|, |T*|], [|T*|, sqrt(b)|T*|]]``. ``schwarz``:
    ``[[|T*|/sqrt(a), T^*], [T, |T*|/sqrt(a)]]`` and ``[[sqrt(b)|T|, T^*], [T, sqrt(b)|T|]]``.
    """
    if not (0.0 < alpha <= 1.0 + 1e-12 and beta >= 1.0 - 1e-12):
        raise InvalidInput(f"need 0 < alpha <= 1 <= beta, got alpha={alpha}, beta={beta}")
    if variant not in VARIANTS:
        raise InvalidInput(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    a = as_matrix(t, square=True, name="T")
    abs_t, abs_ts, _ = abs_pair(a)
    if variant == "squared":
        p = hermitian_part(a.conj().T @ a)
        q = hermitian_part(a @ a.conj().T)
        return [
            _labeled("schur_alpha", q / alpha, p, p / alpha, tol),
            _labeled("schur_beta", beta * p, q, beta * q, tol),
            _labeled("equal_alpha", q / alpha**2, p, q / alpha**2, tol),
            _labeled("equal_beta", beta**2 * p, q, beta**2 * p, tol),
        ]
    if variant == "linear":
        ra, rb = 1.0 / np.sqrt(alpha), np.sqrt(beta)
        return [
            _labeled("linear_alpha", ra * abs_ts, abs_t, ra * abs_t, tol),
            _labeled("linear_beta", rb * abs_t, abs_ts, rb * abs_ts, tol),
        ]
    ra, rb = 1.0 / np.sqrt(alpha), np.sqrt(beta)
    return [
        _labeled("schwarz_alpha", ra * abs_ts, a, ra * abs_ts, tol),
        _labeled("schwarz_beta", rb * abs_t, a, rb * abs_t, tol),
    ]


def is_ab_normal(t, alpha: float, beta: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Direct test of ``alpha^2 |T|^2 <= |T^*|^2 <= beta^2 |T|^2``."""
    a = as_matrix(t, square=True, name="T")
    p = hermitian_part(a.conj().T @ a)
    q = hermitian_part(a @ a.conj().T)
    scale = float(np.linalg.norm(p, 2)) * max(1.0, beta**2)
    lo, _ = _lmin_and_scale(q - alpha**2 * p)
    hi, _ = _lmin_and_scale(beta**2 * p - q)
    return bool(lo >= -tol.threshold(scale) and hi >= -tol.threshold(scale))


# positive linear maps -----------------------------------------------------


class PositiveMap:
    """Base for the completely positive maps used as test maps."""

    def out_dim(self, n: int) -> int:
        return n

    def apply(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t) -> np.ndarray:
        return positive_map_apply(self, t)


@dataclass(eq=False)
class Congruence(PositiveMap):
    """``T -> V^* T V``."""

    V: np.ndarray

    def out_dim(self, n):
        if self.V.shape[0] != n:
            raise InvalidInput(f"congruence V has {self.V.shape[0]} rows, T has size {n}")
        return self.V.shape[1]

    def apply(self, t):
        v = np.asarray(self.V, dtype=np.complex128)
        return v.conj().T @ t @ v


@dataclass(eq=False)
class SumOfCongruences(PositiveMap):
    """``T -> sum_i V_i^* T V_i``."""

    Vs: list

    def out_dim(self, n):
        dims = {Congruence(v).out_dim(n) for v in self.Vs}
        if len(dims) != 1:
            raise InvalidInput("all V_i must have the same shape")
        return dims.pop()

    def apply(self, t):
        return sum(Congruence(v).apply(t) for v in self.Vs)


@dataclass(eq=False)
class Compression(PositiveMap):
    """Leading ``k x k`` principal block."""

    k: int

    def out_dim(self, n):
        if not 1 <= self.k <= n:
            raise InvalidInput(f"compression size {self.k} outside 1..{n}")
        return self.k

    def apply(self, t):
        return t[: self.k, : self.k].copy()


@dataclass(eq=False)
class TraceMap(PositiveMap):
    """``T -> (tr T / n) I``."""

    def apply(self, t):
        n = t.shape[0]
        return (np.trace(t) / n) * np.eye(n, dtype=np.complex128)


def positive_map_apply(phi: PositiveMap, t) -> np.ndarray:
    a = as_matrix(t, square=True, name="T")
    phi.out_dim(a.shape[0])
    return phi.apply(a)
