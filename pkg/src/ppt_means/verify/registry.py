"""Registry of checkable matrix inequalities.

Each check pairs an instance generator with a hypothesis certifier and a
statement. A statement returns a list of :class:`Sub` results, one per
inequality it asserts. A sub-result carries a signed ``margin`` (nonnegative
when the inequality holds) and the ``scale`` of the compared quantities; the
runner normalizes ``margin / max(1, scale)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from ..blocks import (
    PRECONDITION_TOL,
    Block2x2,
    assemble,
    is_ppt,
    isometry_decompose,
    isometry_residual,
)
from ..classes import (
    Compression,
    Congruence,
    SumOfCongruences,
    TraceMap,
    _pencil,
    ab_normal_blocks,
    classify,
    is_ab_normal,
    semi_hypo_block_iff,
)
from ..linalg import (
    PD_RTOL,
    Tolerance,
    _polar_raw,
    abs_pair,
    eigvals_desc,
    hermitian_part,
    norm2,
    psd_power,
)
from ..means import T_GRID, gmean
from . import generators as gen


class Sub(NamedTuple):
    label: str
    margin: float
    scale: float


@dataclass
class Context:
    tol: Tolerance
    t_values: tuple[float, ...]
    rng: np.random.Generator


@dataclass(frozen=True)
class CheckSpec:
    id: str
    name: str
    hypothesis: str
    summary: str
    generator: Callable[[np.random.Generator, int], dict]
    statement: Callable[[dict, Context], list[Sub]]


# comparison helpers ---------------------------------------------------------


def _hn(h: np.ndarray) -> float:
    w = eigvals_desc(h)
    return float(max(abs(w[0]), abs(w[-1])))


def leq(lhs: np.ndarray, rhs: np.ndarray, label: str) -> Sub:
    """Loewner ``lhs <= rhs``; margin ``lambda_min(rhs - lhs)``."""
    margin = float(eigvals_desc(hermitian_part(rhs - lhs))[-1])
    return Sub(label, margin, max(_hn(lhs), _hn(rhs)))


def le(x: float, y: float, label: str) -> Sub:
    return Sub(label, float(y - x), float(max(abs(x), abs(y))))


def eq(x: float, y: float, label: str) -> Sub:
    return Sub(label, -abs(float(x - y)), float(max(abs(x), abs(y))))


def eig_leq(lhs: np.ndarray, rhs: np.ndarray, label: str) -> Sub:
    """``lambda_j(lhs) <= lambda_j(rhs)`` for every j, both spectra sorted descending."""
    wl = eigvals_desc(hermitian_part(lhs))
    wr = eigvals_desc(hermitian_part(rhs))
    scale = float(max(np.max(np.abs(wl)), np.max(np.abs(wr))))
    return Sub(label, float(np.min(wr - wl)), scale)


def agree(a: bool, b: bool, label: str) -> Sub:
    return Sub(label, 0.0 if a == b else -1.0, 0.0)


def bounded(value: float, bound: float, label: str) -> Sub:
    """``value <= bound`` measured in units of ``bound`` so no tolerance is added on top."""
    return Sub(label, (bound - value) / bound, 0.0)


def _t_label(t: float) -> str:
    return f"t={t:.6g}"


# hypothesis certifiers ------------------------------------------------------


def _pd(h: np.ndarray) -> bool:
    w = eigvals_desc(h)
    return bool(w[-1] > PD_RTOL * max(abs(w[0]), abs(w[-1])))


def _psd(h: np.ndarray, tol: Tolerance = PRECONDITION_TOL) -> bool:
    w = eigvals_desc(h)
    return bool(w[-1] >= -tol.threshold(max(abs(w[0]), abs(w[-1]))))


def certify_pd_pair(inst: dict) -> bool:
    return _pd(inst["A"]) and _pd(inst["B"])


def certify_psd_block(inst: dict) -> bool:
    blk = Block2x2(inst["A"], inst["X"], inst["B"])
    return certify_pd_pair(inst) and _psd(assemble(blk))


def certify_hermitian_x(inst: dict) -> bool:
    x = inst["X"]
    herm = np.max(np.abs(x - x.conj().T)) <= 1e-12 * (1.0 + np.max(np.abs(x)))
    return bool(herm) and certify_psd_block(inst)


def certify_ppt(inst: dict) -> bool:
    blk = Block2x2(inst["A"], inst["X"], inst["B"])
    return certify_pd_pair(inst) and is_ppt(blk, PRECONDITION_TOL).is_ppt


def certify_any(inst: dict) -> bool:
    return True


def certify_semi_hyponormal_pair(inst: dict) -> bool:
    a, b = inst["A"], inst["B"]
    if not (classify(a).is_semi_hyponormal and classify(b).is_semi_hyponormal):
        return False
    return _pd(abs_pair(a)[0] + abs_pair(b)[0])


def certify_ab_normal(inst: dict) -> bool:
    s = np.linalg.svd(inst["T"], compute_uv=False)
    return bool(s[-1] > 0 and s[0] / s[-1] <= gen.T_COND_CAP)


HYPOTHESES: dict[str, Callable[[dict], bool]] = {
    "pd-pair": certify_pd_pair,
    "psd-block": certify_psd_block,
    "psd-block-hermitian-x": certify_hermitian_x,
    "ppt": certify_ppt,
    "general": certify_any,
    "semi-hyponormal": certify_semi_hyponormal_pair,
    "ab-normal": certify_ab_normal,
}


# shared pieces ---------------------------------------------------------------


def _blk(inst: dict) -> Block2x2:
    return Block2x2(inst["A"], inst["X"], inst["B"])


def _abs_x(x: np.ndarray):
    """``(|X|, |X^*|, U)`` with ``X = U |X|``."""
    return abs_pair(x)


def _tight(t: np.ndarray, tol: Tolerance) -> tuple[float, float]:
    ev = _pencil(t, tol)
    return float(np.sqrt(max(ev[-1], 0.0))), float(np.sqrt(max(ev[0], 0.0)))


# statements -----------------------------------------------------------------


def s_norm_sum(inst, ctx):
    m = assemble(_blk(inst))
    return [le(norm2(m), norm2(inst["A"]) + norm2(inst["B"]), "norm<=|A|+|B|")]


def s_hiroshima(inst, ctx):
    m = assemble(_blk(inst))
    return [le(norm2(m), norm2(inst["A"] + inst["B"]), "norm<=|A+B|")]


def s_lee_mean_bound(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, _, u = _abs_x(x)
    g = gmean(a, b)
    return [leq(ax, 0.5 * (g + u.conj().T @ g @ u), "|X|<=(G+U*GU)/2")]


def s_fu_refinement(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, _, u = _abs_x(x)
    g = gmean(a, b)
    return [leq(ax, gmean(g, hermitian_part(u.conj().T @ g @ u)), "|X|<=G#U*GU")]


def s_amgm(inst, ctx):
    a, b = inst["A"], inst["B"]
    return [leq(gmean(a, b), 0.5 * (a + b), "A#B<=(A+B)/2")]


def s_thm_weighted_abs(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, axs, u = _abs_x(x)
    ubu = hermitian_part(u.conj().T @ b @ u)
    uau = hermitian_part(u @ a @ u.conj().T)
    subs = []
    for t in ctx.t_values:
        rhs1 = gmean(gmean(a, ubu, t), gmean(a, ubu, 1.0 - t))
        rhs2 = gmean(gmean(uau, b, t), gmean(uau, b, 1.0 - t))
        subs.append(leq(ax, rhs1, f"|X| {_t_label(t)}"))
        subs.append(leq(axs, rhs2, f"|X*| {_t_label(t)}"))
    return subs


def s_cor_weighted_ppt(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, axs, u = _abs_x(x)
    subs = []
    for t in ctx.t_values:
        gt, gs = gmean(a, b, t), gmean(a, b, 1.0 - t)
        subs.append(leq(ax, gmean(gt, hermitian_part(u.conj().T @ gs @ u)), f"|X| {_t_label(t)}"))
        subs.append(leq(axs, gmean(hermitian_part(u @ gt @ u.conj().T), gs), f"|X*| {_t_label(t)}"))
    return subs


def s_eig_weighted_lee(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, axs, _ = _abs_x(x)
    subs = []
    for t in ctx.t_values:
        gt, gs = gmean(a, b, t), gmean(a, b, 1.0 - t)
        subs.append(eig_leq(2.0 * ax - gt, gs, f"lambda_j(2|X|-G_t) {_t_label(t)}"))
        subs.append(eig_leq(2.0 * axs - gs, gt, f"lambda_j(2|X*|-G_1-t) {_t_label(t)}"))
    return subs


def s_thm_refined_norm(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    _, _, u = _abs_x(x)
    m = assemble(_blk(inst))
    return [le(norm2(m), norm2(a + u.conj().T @ b @ u), "norm<=|A+U*BU|")]


def s_isometry_reconstruct(inst, ctx):
    blk = _blk(inst)
    n = blk.n
    subs = []
    for t in ctx.t_values:
        pair = isometry_decompose(blk, t)
        res = isometry_residual(blk, t, pair)
        defect = max(
            norm2(pair.U_tilde.conj().T @ pair.U_tilde - np.eye(n)),
            norm2(pair.V_tilde.conj().T @ pair.V_tilde - np.eye(n)),
        )
        subs.append(bounded(res, 1e-9, f"residual {_t_label(t)}"))
        subs.append(bounded(defect, 1e-10 * n, f"isometry defect {_t_label(t)}"))
    return subs


def s_cor_mean_norm(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    subs = []
    for t in ctx.t_values:
        gt, gs = gmean(a, b, t), gmean(a, b, 1.0 - t)
        bound = norm2(gt) + norm2(gs)
        # a PPT block keeps both arrangements of the off-diagonal pair PSD
        for tag, off in (("X", x), ("X*", x.conj().T)):
            m = np.block([[gt, off], [off.conj().T, gs]])
            subs.append(le(norm2(m), bound, f"norm [{tag} top-right] {_t_label(t)}"))
    return subs


def s_ando_chain(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    g = gmean(a, b)
    nx, ng = norm2(x), norm2(g)
    m = assemble(_blk(inst))
    subs = [le(nx, ng, "|X|<=|A#B|"), le(2.0 * nx, norm2(m), "2|X|<=|M|")]
    for tag, off in (("X", x), ("X*", x.conj().T)):
        half = 0.5 * norm2(np.block([[g, off], [off.conj().T, g]]))
        subs.append(le(nx, half, f"|X|<=norm(G-block)/2 [{tag} top-right]"))
        subs.append(le(half, ng, f"norm(G-block)/2<=|G| [{tag} top-right]"))
    return subs


def s_mixed_schwarz(inst, ctx):
    t = inst["T"]
    alpha, beta = gen.triangle_exponents(ctx.rng)
    abs_t, abs_ts, _ = abs_pair(t)
    p2a = psd_power(abs_t, 2.0 * alpha)
    q2b = psd_power(abs_ts, 2.0 * beta)
    x = t @ psd_power(abs_t, alpha + beta - 1.0)
    m = np.block([[p2a, x.conj().T], [x, q2b]])
    w = eigvals_desc(hermitian_part(m))
    half = 0.5 * norm2(m)
    eq_block = np.block([[abs_ts, t], [t.conj().T, abs_t]])
    label = f"a={alpha:.4f},b={beta:.4f}"
    return [
        Sub(f"block PSD {label}", float(w[-1]), float(max(abs(w[0]), abs(w[-1])))),
        le(norm2(x), half, f"|T|T|^(a+b-1)|<=norm/2 {label}"),
        le(half, norm2(p2a + psd_power(abs_t, 2.0 * beta)), f"norm/2<=||T|^2a+|T|^2b| {label}"),
        eq(norm2(t), 0.5 * norm2(eq_block), "|T|=norm([[|T*|,T],[T*,|T|]])/2"),
    ]


def s_abs_sum_norm(inst, ctx):
    a, b, x = inst["A"], inst["B"], inst["X"]
    ax, axs, _ = _abs_x(x)
    m = assemble(_blk(inst))
    return [le(norm2(m), norm2(a + b + ax + axs), "norm<=|A+B+|X|+|X*||")]


def s_semi_hypo_iff(inst, ctx):
    lhs, rhs = semi_hypo_block_iff(inst["T"], ctx.tol)
    return [agree(lhs, rhs, f"block_psd={lhs},semi_hyponormal={rhs}")]


def s_sum_abs_bound(inst, ctx):
    a, b = inst["A"], inst["B"]
    s = abs_pair(a)[0] + abs_pair(b)[0]
    ax, _, u = abs_pair(a + b)
    return [leq(ax, gmean(s, hermitian_part(u.conj().T @ s @ u)), "|A+B|<=S#U*SU")]


def s_sum_norm_bound(inst, ctx):
    a, b = inst["A"], inst["B"]
    return [le(norm2(a + b), norm2(abs_pair(a)[0] + abs_pair(b)[0]), "|A+B|<=||A|+|B||")]


AB_PERTURBATION = 0.1


def s_ab_equivalences(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    d = AB_PERTURBATION
    params = [
        ("tight", alpha, beta),
        ("loose", alpha * (1 - d), beta * (1 + d)),
        ("alpha+", min(alpha * (1 + d), 1.0), beta),
        ("beta-", alpha, max(beta * (1 - d), 1.0)),
    ]
    subs = []
    for name, a_, b_ in params:
        i = is_ab_normal(t, a_, b_, ctx.tol)
        blocks = {lb.label: lb.psd for lb in ab_normal_blocks(t, a_, b_, "squared", ctx.tol)}
        ii = blocks["schur_alpha"] and blocks["schur_beta"]
        iii = blocks["equal_alpha"] and blocks["equal_beta"]
        subs.append(agree(i, ii, f"{name}: (i)={i} (ii)={ii}"))
        subs.append(agree(i, iii, f"{name}: (i)={i} (iii)={iii}"))
    return subs


def s_ab_linear_blocks(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    subs = []
    for variant in ("linear", "schwarz"):
        for lb in ab_normal_blocks(t, alpha, beta, variant, ctx.tol):
            subs.append(Sub(lb.label, lb.margin, _hn(assemble(lb.block))))
    return subs


def s_ab_eigen(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    abs_t, abs_ts, _ = abs_pair(t)
    nt = norm2(t)
    d1 = 2.0 * np.sqrt(alpha) * abs_t - abs_ts
    d2 = (2.0 / np.sqrt(beta)) * abs_ts - abs_t
    return [
        eig_leq(d1, abs_ts, "lambda_j(2sqrt(a)|T|-|T*|)<=lambda_j(|T*|)"),
        eig_leq(d2, abs_t, "lambda_j(2/sqrt(b)|T*|-|T|)<=lambda_j(|T|)"),
        le(_hn(d1), nt, "|2sqrt(a)|T|-|T*||<=|T|"),
        le(_hn(d2), nt, "|2/sqrt(b)|T*|-|T||<=|T|"),
        le(_hn(abs_t - abs_ts), nt, "||T|-|T*||<=|T|"),
    ]


def s_reverse_amgm(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    abs_t, abs_ts, _ = abs_pair(t)
    g = gmean(abs_t, abs_ts)
    ra, rb = 1.0 / np.sqrt(alpha), np.sqrt(beta)
    return [
        leq(0.5 * (abs_t + abs_ts), min(ra, rb) * g, "(|T|+|T*|)/2<=min(1/sqrt(a),sqrt(b))G"),
        leq(abs_t, ra * g, "|T|<=G/sqrt(a)"),
        leq(abs_ts, rb * g, "|T*|<=sqrt(b)G"),
        leq(abs_ts, ra * g, "|T*|<=G/sqrt(a)"),
        leq(abs_t, rb * g, "|T|<=sqrt(b)G"),
    ]


def _random_map(rng, n: int):
    kind = int(rng.integers(4))
    if kind == 0:
        return Congruence(gen.complex_gaussian(rng, (n, n)))
    if kind == 1:
        k = int(rng.integers(2, 4))
        return SumOfCongruences([gen.complex_gaussian(rng, (n, n)) for _ in range(k)])
    if kind == 2:
        return Compression(int(rng.integers(1, n + 1)))
    return TraceMap()


def s_positive_map(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    abs_t, abs_ts, _ = abs_pair(t)
    phi = _random_map(ctx.rng, t.shape[0])
    pt = phi(t)
    p_abs = hermitian_part(phi(abs_t))
    p_abs_s = hermitian_part(phi(abs_ts))
    apt, _, u = abs_pair(pt)
    name = type(phi).__name__
    return [
        leq(apt, gmean(p_abs_s, hermitian_part(u.conj().T @ p_abs_s @ u)) / np.sqrt(alpha),
            f"{name}: |Phi(T)|<=(1/sqrt(a))(Phi|T*|#U*Phi|T*|U)"),
        leq(apt, np.sqrt(beta) * gmean(p_abs, hermitian_part(u.conj().T @ p_abs @ u)),
            f"{name}: |Phi(T)|<=sqrt(b)(Phi|T|#U*Phi|T|U)"),
    ]


def s_norm_square_reverse(inst, ctx):
    t = inst["T"]
    alpha, beta = _tight(t, ctx.tol)
    lhs = norm2(t) ** 2
    sq = norm2(t @ t)
    return [
        le(lhs, min(1.0 / alpha, beta) * sq, "|T|^2<=min(1/a,b)|T^2|"),
        le(lhs, sq / alpha, "|T|^2<=|T^2|/a"),
        le(lhs, beta * sq, "|T|^2<=b|T^2|"),
    ]


def s_gm_norm_halfpow(inst, ctx):
    a, b = inst["A"], inst["B"]
    rhs = norm2(psd_power(a, 0.5) @ psd_power(b, 0.5))
    return [le(norm2(gmean(a, b)), rhs, "|A#B|<=|A^1/2 B^1/2|")]


_SPECS = [
    ("C1", "norm_sum", "psd-block", gen.psd_block, s_norm_sum,
     "PSD block: ||M|| <= ||A|| + ||B||"),
    ("C2", "hiroshima", "psd-block-hermitian-x", gen.hermitian_x_block, s_hiroshima,
     "PSD block with Hermitian X: ||M|| <= ||A + B||"),
    ("C3", "lee_mean_bound", "ppt", gen.ppt_block, s_lee_mean_bound,
     "PPT: |X| <= (A#B + U*(A#B)U)/2"),
    ("C4", "fu_refinement", "ppt", gen.ppt_block, s_fu_refinement,
     "PPT: |X| <= (A#B) # (U*(A#B)U)"),
    ("C5", "amgm", "pd-pair", gen.pd_pair, s_amgm,
     "PD pair: A#B <= (A+B)/2"),
    ("C6", "thm_weighted_abs", "psd-block", gen.psd_block, s_thm_weighted_abs,
     "PSD block: |X| <= (A#_t U*BU)#(A#_{1-t} U*BU), |X*| <= (UAU*#_t B)#(UAU*#_{1-t} B)"),
    ("C7", "cor_weighted_ppt", "ppt", gen.ppt_block, s_cor_weighted_ppt,
     "PPT: |X| <= (A#_t B)#(U*(A#_{1-t}B)U) and the adjoint form"),
    ("C8", "eig_weighted_lee", "ppt", gen.ppt_block, s_eig_weighted_lee,
     "PPT: lambda_j(2|X| - A#_t B) <= lambda_j(A#_{1-t} B) and the adjoint form"),
    ("C9", "thm_refined_norm", "psd-block", gen.psd_block, s_thm_refined_norm,
     "PSD block: ||M|| <= ||A + U*BU||"),
    ("C10", "isometry_reconstruct", "ppt", gen.ppt_block, s_isometry_reconstruct,
     "PPT: mean-compressed block = U~(A#_t B)U~* + V~(A#_{1-t} B)V~*"),
    ("C11", "cor_mean_norm", "ppt", gen.ppt_block, s_cor_mean_norm,
     "PPT: ||[[A#_t B, X*],[X, A#_{1-t} B]]|| <= ||A#_t B|| + ||A#_{1-t} B||"),
    ("C12", "ando_chain", "ppt", gen.ppt_block, s_ando_chain,
     "PPT: ||X|| <= ||[[A#B, X*],[X, A#B]]||/2 <= ||A#B||; PSD: 2||X|| <= ||M||"),
    ("C13", "mixed_schwarz", "general", gen.general_t, s_mixed_schwarz,
     "any T: mixed Schwarz block PSD, norm chain, ||T|| = ||[[|T*|, T],[T*, |T|]]||/2"),
    ("C14", "abs_sum_norm", "psd-block", gen.psd_block, s_abs_sum_norm,
     "PSD block: ||M|| <= ||A + B + |X| + |X*|||"),
    ("C15", "semi_hypo_iff", "general", gen.normal_or_general_t, s_semi_hypo_iff,
     "[[|T|, T*],[T, |T|]] >= 0 iff T semi-hyponormal"),
    ("C16", "sum_abs_bound", "semi-hyponormal", gen.normal_pair, s_sum_abs_bound,
     "semi-hyponormal A, B: |A+B| <= (|A|+|B|) # (U*(|A|+|B|)U)"),
    ("C17", "sum_norm_bound", "semi-hyponormal", gen.normal_pair, s_sum_norm_bound,
     "semi-hyponormal A, B: ||A+B|| <= || |A|+|B| ||"),
    ("C18", "ab_equivalences", "ab-normal", gen.invertible_t, s_ab_equivalences,
     "(alpha,beta)-normal <=> squared Schur blocks PSD <=> equal-diagonal blocks PSD"),
    ("C19", "ab_linear_blocks", "ab-normal", gen.invertible_t, s_ab_linear_blocks,
     "(alpha,beta)-normal: |T|/|T*| blocks and Schwarz blocks PSD"),
    ("C20", "ab_eigen", "ab-normal", gen.invertible_t, s_ab_eigen,
     "(alpha,beta)-normal: eigenvalue and norm bounds on 2sqrt(a)|T|-|T*|, 2/sqrt(b)|T*|-|T|"),
    ("C21", "reverse_amgm", "ab-normal", gen.invertible_t, s_reverse_amgm,
     "(alpha,beta)-normal: (|T|+|T*|)/2 <= min(1/sqrt(a), sqrt(b)) |T|#|T*| and one-sided bounds"),
    ("C22", "positive_map", "ab-normal", gen.invertible_t, s_positive_map,
     "(alpha,beta)-normal, positive map Phi: |Phi(T)| bounded by means of Phi(|T*|), Phi(|T|)"),
    ("C23", "norm_square_reverse", "ab-normal", gen.invertible_t, s_norm_square_reverse,
     "(alpha,beta)-normal: ||T||^2 <= min(1/alpha, beta) ||T^2||"),
    ("C24", "gm_norm_halfpow", "pd-pair", gen.pd_pair, s_gm_norm_halfpow,
     "PD pair: ||A#B|| <= ||A^1/2 B^1/2||"),
]

REGISTRY: dict[str, CheckSpec] = {
    cid: CheckSpec(cid, name, hyp, summary, g, st) for cid, name, hyp, g, st, summary in _SPECS
}

DEFAULT_T_GRID = T_GRID
