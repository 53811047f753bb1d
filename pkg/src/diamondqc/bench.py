"""Benchmark the compiled kernels against the pure-numpy fallback.

Both backends expose the same two hot functions: the conditional-entropy
angle grid used by the discord search and the batched trace-norm used by
the classical-quantum search. The benchmark times each on identical
inputs and reports the agreement between backends.
"""
from __future__ import annotations

import time

import numpy as np

from . import _kernels_py
from .model import thermal_state
from .params import ModelParams, ThermalPoint


def _load_compiled():
    try:
        from . import _kernels
        return _kernels
    except ImportError:
        return None


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(max(1, repeat)):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _bench_inputs(grid: int, batch: int):
    state = thermal_state(ModelParams(gamma=0.6, jz=0.3, j0=0.3, h=0.35),
                          ThermalPoint(0.5))
    rho = state.matrix().astype(complex)
    thetas = np.linspace(0.0, np.pi, grid)
    phis = np.linspace(0.0, 2.0 * np.pi, grid)

    from .oracle.cq_search import _chi_batch, _project_batch
    rng = np.random.default_rng(3)
    raw = np.column_stack([
        rng.uniform(0.0, np.pi, batch),
        rng.uniform(0.0, 2.0 * np.pi, batch),
        rng.uniform(0.0, 1.0, batch),
        rng.uniform(-1.0, 1.0, (batch, 6)).reshape(batch, 6),
    ])
    chis = _chi_batch(_project_batch(raw))
    return rho, thetas, phis, chis


def run_benchmark(grid: int = 96, batch: int = 512, repeat: int = 3) -> list:
    """Time both kernels on each available backend.

    Returns one row per (kernel, backend) with the best-of-`repeat` time
    and the max absolute deviation from the numpy backend's result.
    """
    rho, thetas, phis, chis = _bench_inputs(grid, batch)
    backends = [("numpy", _kernels_py)]
    compiled = _load_compiled()
    if compiled is not None:
        backends.append(("compiled", compiled))

    rows = []
    ref = {}
    for name, mod in backends:
        out_grid = mod.cond_entropy_grid(rho, thetas, phis)
        t_grid = _time(lambda m=mod: m.cond_entropy_grid(rho, thetas, phis), repeat)
        out_norm = mod.trace_norm_diff_batch(rho, chis)
        t_norm = _time(lambda m=mod: m.trace_norm_diff_batch(rho, chis), repeat)
        if name == "numpy":
            ref["grid"], ref["norm"] = out_grid, out_norm
        rows.append({
            "kernel": f"cond_entropy_grid({grid}x{grid})",
            "backend": name,
            "seconds": t_grid,
            "max_dev": float(np.max(np.abs(out_grid - ref["grid"]))),
        })
        rows.append({
            "kernel": f"trace_norm_diff_batch({batch})",
            "backend": name,
            "seconds": t_norm,
            "max_dev": float(np.max(np.abs(out_norm - ref["norm"]))),
        })
    return rows


def format_benchmark(rows: list) -> str:
    lines = [f"{'kernel':<32} {'backend':<10} {'seconds':>10} {'vs numpy':>10}"]
    by_kernel = {}
    for row in rows:
        by_kernel.setdefault(row["kernel"], {})[row["backend"]] = row
        lines.append(f"{row['kernel']:<32} {row['backend']:<10} "
                     f"{row['seconds']:>10.4f} {row['max_dev']:>10.1e}")
    for kernel, entries in by_kernel.items():
        if "compiled" in entries and entries["compiled"]["seconds"] > 0:
            speedup = entries["numpy"]["seconds"] / entries["compiled"]["seconds"]
            lines.append(f"{kernel}: compiled is {speedup:.1f}x the numpy backend")
    if len(by_kernel[next(iter(by_kernel))]) == 1:
        lines.append("compiled backend not available; showing numpy only")
    return "\n".join(lines)
