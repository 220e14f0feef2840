"""Hot numeric kernels with a numba and a pure-numpy implementation.

The numba path is used when numba imports cleanly and ``SSLAB_NO_JIT`` is
unset (or ``0``).  Every kernel has the same signature and output in both
backends; the numpy backend is also the only one that accepts ``object``
arrays, which is how weights wider than 62 bits are handled.
"""
from __future__ import annotations

import os

import numpy as np

from . import _numpy

INT64_SAFE = 1 << 62


def _jit_requested() -> bool:
    return os.environ.get("SSLAB_NO_JIT", "").strip().lower() not in ("1", "true", "yes")


try:
    if not _jit_requested():
        raise ImportError("jit disabled by SSLAB_NO_JIT")
    from . import _numba
except ImportError:  # numba missing or disabled
    _numba = None

JIT_ENABLED = _numba is not None
BACKEND = "numba" if JIT_ENABLED else "numpy"


def as_int_array(values, bound: int | None = None) -> np.ndarray:
    """int64 array when every value (and ``bound``) fits comfortably, else object."""
    vals = list(values)
    hi = max((abs(int(v)) for v in vals), default=0)
    if bound is not None:
        hi = max(hi, abs(int(bound)))
    if hi < INT64_SAFE:
        return np.asarray(vals, dtype=np.int64).reshape(len(vals))
    return np.asarray([int(v) for v in vals], dtype=object).reshape(len(vals))


def _fast(*arrays) -> bool:
    return JIT_ENABLED and all(a.dtype == np.int64 for a in arrays)


def subset_sums(w: np.ndarray) -> np.ndarray:
    """``out[mask]`` is the sum of ``w[i]`` over the bits ``i`` set in ``mask``."""
    if w.dtype == np.int64 and len(w) and int(np.abs(w).sum()) >= INT64_SAFE:
        w = w.astype(object)
    if _fast(w):
        return _numba.subset_sums(w)
    return _numpy.subset_sums(w)


def popcounts(k: int) -> np.ndarray:
    if JIT_ENABLED:
        return _numba.popcounts(k)
    return _numpy.popcounts(k)


def two_pointer(a: np.ndarray, b: np.ndarray, t: int) -> tuple[int, int]:
    """Match in two ascending arrays: smallest ``j``, then largest ``i``. ``(-1, -1)`` if none."""
    if _fast(a, b) and abs(t) < INT64_SAFE:
        i, j = _numba.two_pointer(a, b, np.int64(t))
        return int(i), int(j)
    return _numpy.two_pointer(a, b, t)


def mod_pairs(a: np.ndarray, b: np.ndarray, p: int, r: int, cap: int):
    """Index pairs with ``(a[i] + b[j]) % p == r``.

    Returns ``(ii, jj, total)``; when ``total > cap`` the index arrays are empty
    and only the count is meaningful.
    """
    if _fast(a, b) and p < INT64_SAFE:
        return _numba.mod_pairs(a, b, np.int64(p), np.int64(r % p), np.int64(cap))
    return _numpy.mod_pairs(a, b, p, r % p, cap)


def ov_first(a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    """First ``(i, j)`` in row-major order with ``a[i] & b[j] == 0``."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if JIT_ENABLED:
        i, j = _numba.ov_first(a, b)
        return int(i), int(j)
    return _numpy.ov_first(a, b)


__all__ = [
    "BACKEND",
    "INT64_SAFE",
    "JIT_ENABLED",
    "as_int_array",
    "mod_pairs",
    "ov_first",
    "popcounts",
    "subset_sums",
    "two_pointer",
]
