"""Kernel backend selection.

At import time the compiled extension is preferred; the numpy fallback is
used when the build skipped compilation.  `set_backend` exists so the
benchmark and the equivalence tests can pin one side explicitly.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_active = _ckernels if _ckernels is not None else _kernels_py


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _ckernels is not None else ("python",)


def active_backend() -> str:
    return _active.BACKEND_NAME


def set_backend(name: str) -> None:
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _ckernels is None:
            raise RuntimeError("compiled kernel extension is not available")
        _active = _ckernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def gaussian_kernel(sigma: float, truncate: float = 3.0) -> np.ndarray:
    """Normalized Gaussian taps with half-width ceil(truncate * sigma)."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    half = math.ceil(truncate * sigma)
    offsets = np.arange(-half, half + 1, dtype=np.float64)
    weights = np.exp(-(offsets * offsets) / (2.0 * sigma * sigma))
    return weights / weights.sum()


def smooth_columns(signal, kernel):
    return _active.smooth_columns(signal, kernel)


def third_difference(signal, fps):
    return _active.third_difference(signal, fps)


def residual_mean_norm(a, b):
    return _active.residual_mean_norm(a, b)
