"""Kernel backend selection.

The compiled extension is preferred when importable; the NumPy fallback
is always available. Set DIAMONDQC_KERNELS=numpy or =compiled to force a
choice (forcing "compiled" raises if the extension is missing, instead
of silently degrading).
"""
from __future__ import annotations

import os

from . import _kernels_py

_requested = os.environ.get("DIAMONDQC_KERNELS", "").strip().lower()

if _requested == "numpy":
    _impl = _kernels_py
elif _requested == "compiled":
    from . import _kernels as _impl  # noqa: F401  (ImportError is the contract)
elif _requested == "":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py
else:
    raise RuntimeError(
        f"DIAMONDQC_KERNELS={_requested!r} not understood; use 'numpy' or 'compiled'")

cond_entropy_grid = _impl.cond_entropy_grid
trace_norm_diff_batch = _impl.trace_norm_diff_batch


def backend_name() -> str:
    """Which kernel implementation is active: 'compiled' or 'numpy'."""
    return _impl.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    """All importable kernel implementations on this install."""
    names = ["numpy"]
    try:
        from . import _kernels  # noqa: F401
        names.insert(0, "compiled")
    except ImportError:
        pass
    return tuple(names)
