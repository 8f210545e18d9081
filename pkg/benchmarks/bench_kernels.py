"""Benchmark the compiled kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--repeats N]

Shapes follow the production workload: T frames by 3*J columns of joint
angles (J = 22) plus a long-corpus variant.
"""

import argparse
import time

import numpy as np

from humeval import _kernels_py
from humeval.kernels import gaussian_kernel

try:
    from humeval import _ckernels
except ImportError:
    _ckernels = None

SHAPES = [(90, 66), (300, 66), (3000, 66), (3000, 198)]


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_backend(mod, sig, kernel):
    jerk = mod.third_difference(sig, 30.0)
    smoothed = mod.smooth_columns(jerk, kernel)
    return {
        "smooth": lambda: mod.smooth_columns(jerk, kernel),
        "jerk": lambda: mod.third_difference(sig, 30.0),
        "residual": lambda: mod.residual_mean_norm(jerk, smoothed),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled backend not built (pip install -e . without HUMEVAL_PURE=1); nothing to compare")

    kernel = gaussian_kernel(2.0, 3.0)
    rng = np.random.default_rng(0)
    header = f"{'shape':>12}  {'op':<8}  {'python':>10}  {'compiled':>10}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for shape in SHAPES:
        sig = np.ascontiguousarray(rng.normal(size=shape))
        py_ops = bench_backend(_kernels_py, sig, kernel)
        c_ops = bench_backend(_ckernels, sig, kernel) if _ckernels is not None else None
        for name, py_fn in py_ops.items():
            py_t = best_of(py_fn, args.repeats)
            if c_ops is None:
                print(f"{str(shape):>12}  {name:<8}  {py_t * 1e6:>8.1f}us  {'n/a':>10}  {'':>8}")
                continue
            c_t = best_of(c_ops[name], args.repeats)
            print(
                f"{str(shape):>12}  {name:<8}  {py_t * 1e6:>8.1f}us  {c_t * 1e6:>8.1f}us  {py_t / c_t:>7.2f}x"
            )

    if _ckernels is not None:
        sig = np.ascontiguousarray(rng.normal(size=(500, 66)))
        jerk_p = _kernels_py.third_difference(sig, 30.0)
        jerk_c = _ckernels.third_difference(sig, 30.0)
        worst = float(np.abs(jerk_p - jerk_c).max())
        s_p = _kernels_py.smooth_columns(sig, kernel)
        s_c = _ckernels.smooth_columns(sig, kernel)
        worst = max(worst, float(np.abs(s_p - s_c).max()))
        print(f"\nmax backend deviation on a 500x66 signal: {worst:.3g}")


if __name__ == "__main__":
    main()
