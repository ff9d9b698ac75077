"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Workloads mirror the real pipeline: 14x14 -> 224x224 upsampling, opening a
224x224 mask with a 3x3 kernel, and labeling the components of a blobby
224x224 mask.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from leafcam._kernels import _pykernels

try:
    from leafcam._kernels import _cykernels
except ImportError:
    _cykernels = None


def blobby_mask(rng, size=224, blobs=12):
    m = np.zeros((size, size), dtype=np.uint8)
    for _ in range(blobs):
        cy, cx = rng.integers(20, size - 20, size=2)
        r = int(rng.integers(4, 18))
        yy, xx = np.ogrid[0:size, 0:size]
        m[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = 1
    return m


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    mask = blobby_mask(rng)
    small = rng.random((14, 14)).astype(np.float32)

    workloads = [
        ("erode 224x224 k3", lambda impl: impl.erode(mask, 3)),
        ("dilate 224x224 k3", lambda impl: impl.dilate(mask, 3)),
        ("resize 14x14 -> 224x224", lambda impl: impl.resize_bilinear(small, 224, 224)),
        ("label 224x224", lambda impl: impl.label_components(mask)),
    ]

    print(f"{'workload':<26} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, call in workloads:
        t_py = timeit(lambda: call(_pykernels), args.repeats)
        if _cykernels is None:
            print(f"{name:<26} {t_py * 1e3:>9.3f}ms {'n/a':>10} {'':>8}")
            continue
        t_cy = timeit(lambda: call(_cykernels), args.repeats)
        out_py, out_cy = call(_pykernels), call(_cykernels)
        if isinstance(out_py, tuple):
            assert out_py[1] == out_cy[1] and np.array_equal(out_py[0], out_cy[0])
        else:
            assert np.array_equal(out_py, out_cy)
        print(
            f"{name:<26} {t_py * 1e3:>9.3f}ms {t_cy * 1e3:>9.3f}ms {t_py / t_cy:>7.1f}x"
        )
    if _cykernels is None:
        print("\ncompiled kernels not built; run `python setup.py build_ext --inplace`")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
