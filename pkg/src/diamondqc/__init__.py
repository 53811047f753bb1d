"""Thermal quantum correlations of the spin-1/2 Ising-XYZ diamond chain.

The package computes pairwise correlation measures (quantum discord,
trace-distance discord, concurrence, mutual information) for the
Heisenberg dimer of an infinite diamond chain whose interstitial
dimers couple through classical Ising spins. Closed-form transfer
matrix expressions drive the fast path; independent brute-force
oracles (finite-chain contraction, measurement-grid discord search,
classical-quantum pattern search) validate them.
"""
from ._backend import available_backends, backend_name
from .measures import (
    concurrence,
    correlation_report,
    mutual_information,
    qd_x_state,
    tdd_x_state,
    von_neumann_entropy,
    x_state_measures,
)
from .model import (
    correlators,
    dimer_density_matrix,
    sector_weight,
    thermal_entries_grid,
    thermal_state,
    transfer_eigenvalue,
)
from .params import CorrelationSet, DimerDensityMatrix, ModelParams, ThermalPoint
from .sweep import Axis, SweepSpec, count_peaks, emit_csv, figure_preset, run_sweep

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "CorrelationSet",
    "DimerDensityMatrix",
    "ModelParams",
    "SweepSpec",
    "ThermalPoint",
    "available_backends",
    "backend_name",
    "concurrence",
    "correlation_report",
    "correlators",
    "count_peaks",
    "dimer_density_matrix",
    "emit_csv",
    "figure_preset",
    "mutual_information",
    "qd_x_state",
    "run_sweep",
    "sector_weight",
    "tdd_x_state",
    "thermal_entries_grid",
    "thermal_state",
    "transfer_eigenvalue",
    "von_neumann_entropy",
    "x_state_measures",
    "__version__",
]
