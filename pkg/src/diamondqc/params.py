"""Domain types for the diamond-chain model and its thermal dimer state.

Conventions fixed by the oracle calibration (see oracle.finite_chain):
the quantum dimer carries spin-1/2 operators (Pauli matrices divided by
two) and the classical bridge spins take the values +1 and -1. All
energies are expressed in units of the XY exchange J, temperatures as
T/J with k_B = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Summed neighboring bridge-spin values for the three distinct sectors.
SECTOR_SPIN_SUMS = (2.0, 0.0, -2.0)


@dataclass(frozen=True)
class ModelParams:
    """Couplings of one diamond unit cell, in units of J.

    gamma skews the XY exchange into J(1+gamma) sigma^x sigma^x plus
    J(1-gamma) sigma^y sigma^y; jz is the Ising-type dimer coupling;
    j0 couples the dimer z components to the neighboring bridge spins;
    h is the magnetic field (the bridge spins see h/2 per neighbor).
    """
    gamma: float = 0.0
    jz: float = 0.0
    j0: float = 0.0
    h: float = 0.0
    j: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "jz", "j0", "h", "j"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"non-finite parameter {name}={v}")


@dataclass(frozen=True)
class ThermalPoint:
    """Temperature in units of J; strictly positive."""
    t: float

    def __post_init__(self):
        if not (np.isfinite(self.t) and self.t > 0.0):
            raise ValueError(f"temperature must be finite and positive, got {self.t}")

    @property
    def beta(self) -> float:
        return 1.0 / self.t


@dataclass(frozen=True)
class CorrelationSet:
    """Thermodynamic-limit dimer expectations in spin-1/2 normalization.

    xx = <s_a^x s_b^x>, yy = <s_a^y s_b^y>, zz = <s_a^z s_b^z>,
    z = <s_a^z> = <s_b^z>. Bounds: |xx|, |yy|, |zz| <= 1/4, |z| <= 1/2.
    """
    xx: float
    yy: float
    zz: float
    z: float

    _SLACK = 1e-9

    def __post_init__(self):
        for name, bound in (("xx", 0.25), ("yy", 0.25), ("zz", 0.25), ("z", 0.5)):
            v = getattr(self, name)
            if not np.isfinite(v) or abs(v) > bound + self._SLACK:
                raise ValueError(f"correlator {name}={v} outside [-{bound}, {bound}]")


@dataclass(frozen=True)
class DimerDensityMatrix:
    """Two-qubit X-form density matrix of one dimer.

    Nonzero entries sit on the diagonal (r11, r22, r33, r44) and the
    anti-diagonal (r14 = rho_14 = rho_41, r23 = rho_23 = rho_32), all
    real. The model Hamiltonian is real in the standard basis, so the
    off-diagonals carry no phase; every measure downstream depends on
    them only through their absolute values.

    min_eig and psd_flag are derived on construction: psd_flag is True
    when the smallest eigenvalue is >= -1e-10, i.e. the matrix is
    positive semidefinite up to numerical noise. A False flag marks an
    inconsistent input rather than raising, so sweeps can record it.
    """
    r11: float
    r22: float
    r33: float
    r44: float
    r14: float
    r23: float
    min_eig: float = None  # type: ignore[assignment]
    psd_flag: bool = None  # type: ignore[assignment]

    PSD_TOL = -1e-10

    def __post_init__(self):
        vals = self.eigenvalues()
        object.__setattr__(self, "min_eig", float(vals.min()))
        object.__setattr__(self, "psd_flag", bool(self.min_eig >= self.PSD_TOL))

    @classmethod
    def from_matrix(cls, m: np.ndarray, atol: float = 1e-12) -> "DimerDensityMatrix":
        """Validate and convert a 4x4 array with X structure.

        Rejects non-Hermitian input, any entry off the diagonal and
        anti-diagonal larger than atol, and trace deviating from 1 by
        more than 1e-9. Off-diagonal phases are dropped (their absolute
        values are stored): all supported measures are invariant under
        the local phase rotations that remove them.
        """
        m = np.asarray(m)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > 1e-10:
            raise ValueError("matrix is not Hermitian")
        mask = np.zeros((4, 4), dtype=bool)
        mask[np.arange(4), np.arange(4)] = True
        mask[0, 3] = mask[3, 0] = mask[1, 2] = mask[2, 1] = True
        off = np.abs(m[~mask]).max() if (~mask).any() else 0.0
        if off > atol:
            raise ValueError(f"matrix is not X-structured: off-pattern magnitude {off:.3e}")
        tr = float(np.real(np.trace(m)))
        if abs(tr - 1.0) > 1e-9:
            raise ValueError(f"trace {tr} deviates from 1")
        diag = np.real(np.diag(m))
        r14 = m[0, 3]
        r23 = m[1, 2]
        to_real = lambda v: float(np.real(v)) if abs(np.imag(v)) <= atol else float(np.abs(v))
        return cls(float(diag[0]), float(diag[1]), float(diag[2]), float(diag[3]),
                   to_real(r14), to_real(r23))

    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4))
        m[0, 0], m[1, 1], m[2, 2], m[3, 3] = self.r11, self.r22, self.r33, self.r44
        m[0, 3] = m[3, 0] = self.r14
        m[1, 2] = m[2, 1] = self.r23
        return m

    def eigenvalues(self) -> np.ndarray:
        """All four eigenvalues, exact 2x2-block closed form, ascending."""
        eo = 0.5 * (self.r11 + self.r44)
        do = np.hypot(0.5 * (self.r11 - self.r44), self.r14)
        ei = 0.5 * (self.r22 + self.r33)
        di = np.hypot(0.5 * (self.r22 - self.r33), self.r23)
        return np.sort(np.array([eo - do, eo + do, ei - di, ei + di]))

    def trace(self) -> float:
        return self.r11 + self.r22 + self.r33 + self.r44

    def reduced_a(self) -> np.ndarray:
        """Marginal of the first qubit (diagonal for X form)."""
        return np.array([self.r11 + self.r22, self.r33 + self.r44])

    def reduced_b(self) -> np.ndarray:
        """Marginal of the second qubit (diagonal for X form)."""
        return np.array([self.r11 + self.r33, self.r22 + self.r44])

    def validate(self) -> "DimerDensityMatrix":
        """Raise unless trace is 1 (to 1e-9) and the matrix is PSD."""
        if abs(self.trace() - 1.0) > 1e-9:
            raise ValueError(f"trace {self.trace()} deviates from 1")
        if not self.psd_flag:
            raise ValueError(f"matrix has eigenvalue {self.min_eig:.3e} < -1e-10")
        return self
