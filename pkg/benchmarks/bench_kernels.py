"""Time the numba and numpy kernel backends on the checkers' real workloads.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each workload is the integer operator stack a checker actually scans. The
numba timing excludes the first (compiling) call, which is reported
separately. Both backends must return identical hits.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from jtsankov import kernels
from jtsankov.checkers import _jacobi_stack, _skew_stack, square_splits
from jtsankov.constructions import defn18_tensor, lemma22_tensor, lemma32_tensor


def workloads():
    l32, l22, d4 = lemma32_tensor(), lemma22_tensor(), defn18_tensor(4, 0)
    for label, A in (("lemma-3.2 (m=14)", l32), ("lemma-2.2 (m=8)", l22), ("defn-1.8 k=4 (m=8)", d4)):
        m = A.dim
        _, jstack, _ = _jacobi_stack(A, 2 * m)
        _, sstack, _ = _skew_stack(A, 2 * m)
        _, splits = square_splits(m)
        yield f"{label}: commutators", kernels.first_noncommuting, (jstack,)
        yield f"{label}: products", kernels.first_nonzero_product, (jstack, jstack)
        yield f"{label}: symmetrized squares", kernels.first_nonzero_symmetrized, (jstack, splits)
        yield f"{label}: skew products", kernels.first_nonzero_product, (sstack, sstack)


def timed(fn, args, repeat: int):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'workload':48s} {'numpy':>10s} {'numba':>10s} {'compile':>10s} {'speedup':>8s}")
    for label, fn, data in workloads():
        os.environ[kernels.BACKEND_ENV] = "numpy"
        t_np, hit_np = timed(fn, data, args.repeat)
        os.environ[kernels.BACKEND_ENV] = "numba"
        start = time.perf_counter()
        fn(*data)
        compile_s = time.perf_counter() - start
        t_nb, hit_nb = timed(fn, data, args.repeat)
        if hit_np != hit_nb:
            raise SystemExit(f"backend disagreement on {label}: {hit_np} vs {hit_nb}")
        dtype = "int64" if all(np.asarray(d).dtype == np.int64 for d in data) else "object"
        print(f"{label + ' [' + dtype + ']':48s} {t_np:10.4f} {t_nb:10.4f} {compile_s:10.3f} {t_np / t_nb:8.1f}x")
    os.environ.pop(kernels.BACKEND_ENV, None)


if __name__ == "__main__":
    main()
