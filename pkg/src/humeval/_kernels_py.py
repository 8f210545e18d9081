"""Numpy implementations of the hot kernels.

Used when the compiled extension is unavailable; also the reference the
extension is benchmarked against.  Both backends keep the same operation
order inside the third difference so constant signals cancel exactly.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def smooth_columns(signal: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Convolve each column with ``kernel`` using edge-inclusive reflection.

    ``signal`` is (T, D); the kernel length must be odd.  Reflection repeats
    as often as needed, so kernels wider than the signal are fine.
    """
    signal = np.asarray(signal, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    T = signal.shape[0]
    half = (kernel.shape[0] - 1) // 2
    padded = np.pad(signal, ((half, half), (0, 0)), mode="symmetric")
    out = np.zeros_like(signal)
    for k in range(kernel.shape[0]):
        out += kernel[k] * padded[k : k + T]
    return out


def third_difference(signal: np.ndarray, fps: float) -> np.ndarray:
    """Forward third difference scaled to per-second units (fps cubed).

    Computed as (x[t+3] - x[t]) - 3 (x[t+2] - x[t+1]) so that constant
    signals yield exact zeros.  Output has T - 3 rows.
    """
    x = np.asarray(signal, dtype=np.float64)
    scale = float(fps) ** 3
    return ((x[3:] - x[:-3]) - 3.0 * (x[2:-1] - x[1:-2])) * scale


def residual_mean_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Mean over rows of the Euclidean norm of ``a - b``."""
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.sqrt((diff * diff).sum(axis=1)).mean())
