"""Time each hot kernel under the numba and the pure-numpy backend.

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1]

Prints one CSV row per (kernel, backend) with the best-of-repeat time and the
numpy/numba speed ratio.  Compilation happens in a warm-up call that is not
timed.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from sslab.kernels import _numpy

try:
    from sslab.kernels import _numba
except ImportError:
    _numba = None


def cases(scale: int, rng: np.random.Generator):
    w = rng.integers(1, 1 << 32, size=16 + scale).astype(np.int64)
    yield "subset_sums", (w,)
    a = np.sort(rng.integers(-(1 << 40), 1 << 40, size=200_000 * scale))
    b = np.sort(rng.integers(-(1 << 40), 1 << 40, size=200_000 * scale))
    yield "two_pointer", (a, b, np.int64(7))
    m = rng.integers(0, 1 << 40, size=4096 * scale)
    n = rng.integers(0, 1 << 40, size=4096 * scale)
    yield "mod_pairs", (m, n, np.int64(4093), np.int64(11), np.int64(1 << 40))
    x = rng.integers(1, 1 << 16, size=3000 * scale).astype(np.uint64) | np.uint64(1)
    y = rng.integers(1, 1 << 16, size=3000 * scale).astype(np.uint64) | np.uint64(1)
    yield "ov_first", (x, y)


def best_of(fn, args, repeat: int) -> float:
    fn(*args)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def stream_case(scale: int, rng: np.random.Generator):
    from sslab.core import generate_instance
    from sslab.streams import part_sums, split_indices, _find_py

    inst = generate_instance(28 + 4 * (scale - 1), planted=False, seed=3)
    lists = [part_sums(inst.items, idx) for idx in split_indices(inst.n, 4)]
    return lists, inst.target, _find_py


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--scale", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    out = csv.writer(sys.stdout)
    out.writerow(["kernel", "backend", "seconds", "numpy_over_numba"])
    for name, kargs in cases(args.scale, rng):
        t_np = best_of(getattr(_numpy, name), kargs, args.repeat)
        out.writerow([name, "numpy", f"{t_np:.6f}", ""])
        if _numba is not None:
            t_nb = best_of(getattr(_numba, name), kargs, args.repeat)
            out.writerow([name, "numba", f"{t_nb:.6f}", f"{t_np / t_nb:.1f}"])
    lists, t, find_py = stream_case(args.scale, rng)
    t_py = best_of(find_py, (*lists, t), max(1, args.repeat // 2))
    out.writerow(["four_list_search", "python-heap", f"{t_py:.6f}", ""])
    if _numba is not None:
        t_nb = best_of(_numba.ss_find, (*lists, np.int64(t)), args.repeat)
        out.writerow(["four_list_search", "numba", f"{t_nb:.6f}", f"{t_py / t_nb:.1f}"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
