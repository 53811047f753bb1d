"""Quantum discord by direct minimization over projective measurements.

The measured subsystem is the second qubit; the measurement basis is a
rank-1 projector pair along the Bloch direction (theta, phi). The
post-measurement conditional entropy is scanned on an inclusive
(theta, phi) grid and then refined by repeatedly re-gridding a shrinking
box around the incumbent (golden-section shrink factor). Everything is
deterministic for fixed inputs; the incumbent minimum never increases
with more grid points or more refinement rounds.
"""
from __future__ import annotations

import numpy as np

from .._backend import cond_entropy_grid
from ..params import DimerDensityMatrix

_SHRINK = 0.382  # golden-section complement
_REFINE_POINTS = 9


def _entropy_bits(vals: np.ndarray) -> float:
    vals = np.clip(vals, 0.0, 1.0)
    vals = vals[vals > 1e-300]
    return float(-(vals * np.log2(vals)).sum())


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DimerDensityMatrix):
        return rho.validate().matrix().astype(complex)
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > 1e-10:
        raise ValueError("matrix is not Hermitian")
    vals = np.linalg.eigvalsh(m)
    if vals.min() < -1e-8 or abs(vals.sum() - 1.0) > 1e-6:
        raise ValueError("input is not a density matrix")
    return m


def qd_bruteforce(rho, n_grid: int = 24, n_refine: int = 6) -> float:
    """Quantum discord = mutual information - maximal classical correlation.

    Works on any two-qubit density matrix (4x4), not only X states.
    n_grid >= 16 is required; n_refine counts the local re-grid rounds.
    """
    if n_grid < 16:
        raise ValueError(f"n_grid must be >= 16, got {n_grid}")
    if n_refine < 0:
        raise ValueError(f"n_refine must be >= 0, got {n_refine}")
    m = _as_matrix(rho)

    rho4 = m.reshape(2, 2, 2, 2)
    rho_a = np.trace(rho4, axis1=1, axis2=3)
    rho_b = np.trace(rho4, axis1=0, axis2=2)
    s_a = _entropy_bits(np.linalg.eigvalsh(rho_a))
    s_b = _entropy_bits(np.linalg.eigvalsh(rho_b))
    s_ab = _entropy_bits(np.linalg.eigvalsh(m))

    thetas = np.linspace(0.0, np.pi, n_grid)
    phis = np.linspace(0.0, 2.0 * np.pi, n_grid)
    grid = cond_entropy_grid(m, thetas, phis)
    k = int(np.argmin(grid))
    best = float(grid.flat[k])
    bt = thetas[k // n_grid]
    bp = phis[k % n_grid]

    wt = np.pi / max(n_grid - 1, 1)
    wp = 2.0 * np.pi / max(n_grid - 1, 1)
    for _ in range(n_refine):
        ts = np.linspace(bt - wt, bt + wt, _REFINE_POINTS)
        ps = np.linspace(bp - wp, bp + wp, _REFINE_POINTS)
        local = cond_entropy_grid(m, ts, ps)
        k = int(np.argmin(local))
        if float(local.flat[k]) < best:
            best = float(local.flat[k])
            bt = ts[k // _REFINE_POINTS]
            bp = ps[k % _REFINE_POINTS]
        wt *= _SHRINK
        wp *= _SHRINK

    # mutual information minus classical correlation S(A) - min cond entropy
    return (s_a + s_b - s_ab) - (s_a - best)
