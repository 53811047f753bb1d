"""Correlation measures for two-qubit X states.

All entropies are in bits (base-2 logarithms). The discord closed form
returns the minimum of its two measurement branches; the trace-distance
discord closed form falls back to the numerical classical-quantum
minimizer when its denominator degenerates (for example on Bell
projectors, where the printed expression is 0/0).

The batch entry point `x_state_measures` evaluates everything over
broadcastable arrays of the six X-state entries; the scalar operations
wrap it, so scalar and grid paths share one implementation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import DimerDensityMatrix

_DEGENERATE_DEN = 1e-12


def _xlog2x(x):
    """x * log2(x), elementwise, with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = x > 1e-300
    out[m] = x[m] * np.log2(x[m])
    return out


def _binary_entropy(p):
    p = np.asarray(p, dtype=float)
    return -(_xlog2x(p) + _xlog2x(1.0 - p))


@dataclass(frozen=True)
class TddBranch:
    """Intermediate quantities of the trace-distance-discord closed form."""
    g1: float
    g2: float
    g3: float
    xa3: float
    gmax_sq: float
    gmin_sq: float


@dataclass(frozen=True)
class CorrelationReport:
    """All measures of one X state, plus branch diagnostics."""
    qd: float
    tdd: float
    concurrence: float
    mutual_info: float
    entropy_ab: float
    entropy_a: float
    d1: float
    d2: float
    tdd_branch: TddBranch


def _as_x(rho) -> DimerDensityMatrix:
    if isinstance(rho, DimerDensityMatrix):
        return rho
    return DimerDensityMatrix.from_matrix(np.asarray(rho))


def von_neumann_entropy(rho) -> float:
    """Entropy in bits of a Hermitian PSD unit-trace matrix (dim <= 4).

    Accepts a DimerDensityMatrix (exact block eigenvalues) or an ndarray.
    Eigenvalues in [-1e-8, 0) are treated as rounding noise and clipped;
    anything more negative, or a trace off 1 by more than 1e-6, raises.
    """
    if isinstance(rho, DimerDensityMatrix):
        vals = rho.eigenvalues()
    else:
        m = np.asarray(rho)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] > 4:
            raise ValueError(f"expected a square matrix of dim <= 4, got {m.shape}")
        if np.abs(m - m.conj().T).max() > 1e-10:
            raise ValueError("matrix is not Hermitian")
        vals = np.linalg.eigvalsh(m)
    if vals.min() < -1e-8:
        raise ValueError(f"matrix has eigenvalue {vals.min():.3e} < -1e-8")
    tr = float(vals.sum())
    if abs(tr - 1.0) > 1e-6:
        raise ValueError(f"trace {tr} deviates from 1 by more than 1e-6")
    vals = np.clip(vals, 0.0, 1.0)
    return float(-_xlog2x(vals).sum())


def x_state_measures(r11, r22, r33, r44, r14, r23, tdd_fallback: bool = True):
    """Every measure over broadcastable arrays of X-state entries.

    Returns a dict of arrays: qd, d1, d2, tdd, concurrence, mutual_info,
    entropy_ab, entropy_a, eig_min, psd_flag. With tdd_fallback=True,
    entries whose closed-form denominator degenerates are recomputed by
    the classical-quantum minimizer (deterministic, seeded); pass False
    to get NaN there instead.

    The discord branches assume the symmetric X family (r22 == r33); every
    thermal state produced by the model module satisfies this.
    """
    r11, r22, r33, r44, r14, r23 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (r11, r22, r33, r44, r14, r23)))

    eo = 0.5 * (r11 + r44)
    do = np.hypot(0.5 * (r11 - r44), r14)
    ei = 0.5 * (r22 + r33)
    di = np.hypot(0.5 * (r22 - r33), r23)
    eigs = np.stack([eo - do, eo + do, ei - di, ei + di])
    eig_min = eigs.min(axis=0)
    psd_flag = eig_min >= DimerDensityMatrix.PSD_TOL
    entropy_ab = -_xlog2x(np.clip(eigs, 0.0, 1.0)).sum(axis=0)

    pa = r11 + r22
    pb = r11 + r33
    entropy_a = _binary_entropy(pa)
    entropy_b = _binary_entropy(pb)
    mutual_info = entropy_a + entropy_b - entropy_ab

    # branch 1: measurement along the computational axis
    cond_z = -(_xlog2x(r11) + _xlog2x(r22) - _xlog2x(r11 + r22)) \
             - (_xlog2x(r44) + _xlog2x(r22) - _xlog2x(r22 + r44))
    d1 = entropy_a - entropy_ab + cond_z
    # branch 2: transverse measurement
    big_gamma = np.sqrt((r11 - r44) ** 2 + 4.0 * (np.abs(r14) + np.abs(r23)) ** 2)
    d2 = entropy_a - entropy_ab + _binary_entropy(np.clip(0.5 * (1.0 + big_gamma), 0.0, 1.0))
    qd = np.minimum(d1, d2)
    qd = np.where((qd < 0.0) & (qd >= -1e-12), 0.0, qd)

    g1 = 2.0 * (np.abs(r23) + np.abs(r14))
    g2 = 2.0 * (np.abs(r23) - np.abs(r14))
    g3 = 1.0 - 2.0 * (r22 + r33)
    xa3 = 2.0 * (r11 + r22) - 1.0
    gmax_sq = np.maximum(g3 * g3, g2 * g2 + xa3 * xa3)
    gmin_sq = np.minimum(g1 * g1, g3 * g3)
    den = gmax_sq - gmin_sq + g1 * g1 - g2 * g2
    degenerate = np.abs(den) < _DEGENERATE_DEN
    safe_den = np.where(degenerate, 1.0, den)
    num = np.maximum(g1 * g1 * gmax_sq - g2 * g2 * gmin_sq, 0.0)
    tdd = np.sqrt(np.maximum(num / safe_den, 0.0))
    tdd = np.where(degenerate, np.nan, tdd)
    if tdd_fallback and degenerate.any():
        from .oracle.cq_search import tdd_bruteforce
        it = np.nditer(degenerate, flags=["multi_index"])
        for flag in it:
            if not flag:
                continue
            idx = it.multi_index
            state = DimerDensityMatrix(float(r11[idx]), float(r22[idx]),
                                       float(r33[idx]), float(r44[idx]),
                                       float(r14[idx]), float(r23[idx]))
            tdd[idx] = tdd_bruteforce(state, n_starts=8, seed=0)

    conc = 2.0 * np.maximum(0.0, np.maximum(
        np.abs(r14) - np.sqrt(np.maximum(r22 * r33, 0.0)),
        np.abs(r23) - np.sqrt(np.maximum(r11 * r44, 0.0))))

    return {
        "qd": qd, "d1": d1, "d2": d2, "tdd": tdd,
        "concurrence": conc, "mutual_info": mutual_info,
        "entropy_ab": entropy_ab, "entropy_a": entropy_a,
        "eig_min": eig_min, "psd_flag": psd_flag,
        "tdd_g1": g1, "tdd_g2": g2, "tdd_g3": g3, "tdd_xa3": xa3,
        "tdd_gmax_sq": gmax_sq, "tdd_gmin_sq": gmin_sq,
    }


def _scalar_measures(rho) -> dict:
    x = _as_x(rho).validate()
    out = x_state_measures(x.r11, x.r22, x.r33, x.r44, x.r14, x.r23)
    return {k: (bool(v) if k == "psd_flag" else float(v)) for k, v in out.items()}


def mutual_information(rho) -> float:
    """I = S(A) + S(B) - S(AB), in bits; marginals are diagonal for X form."""
    return _scalar_measures(rho)["mutual_info"]


def qd_x_state(rho):
    """Quantum discord closed form: (qd, d1, d2) with qd = min(d1, d2).

    d1 is the computational-axis measurement branch, d2 the transverse
    one. At equality (|d1 - d2| < 1e-12) d1 is the reported branch.
    Rejects non-X input (off-pattern magnitude above 1e-12).
    """
    m = _scalar_measures(rho)
    return m["qd"], m["d1"], m["d2"]


def tdd_x_state(rho) -> float:
    """Trace-distance discord closed form, in [0, 1].

    Degenerate denominators (below 1e-12 in magnitude) fall back to the
    numerical classical-quantum minimizer.
    """
    return _scalar_measures(rho)["tdd"]


def concurrence(rho) -> float:
    """Wootters concurrence, X-state closed form, in [0, 1]."""
    return _scalar_measures(rho)["concurrence"]


def correlation_report(rho) -> CorrelationReport:
    """All measures of one X state in a single report."""
    m = _scalar_measures(rho)
    branch = TddBranch(g1=m["tdd_g1"], g2=m["tdd_g2"], g3=m["tdd_g3"],
                       xa3=m["tdd_xa3"], gmax_sq=m["tdd_gmax_sq"],
                       gmin_sq=m["tdd_gmin_sq"])
    return CorrelationReport(qd=m["qd"], tdd=m["tdd"], concurrence=m["concurrence"],
                             mutual_info=m["mutual_info"], entropy_ab=m["entropy_ab"],
                             entropy_a=m["entropy_a"], d1=m["d1"], d2=m["d2"],
                             tdd_branch=branch)
