"""Pure-numpy kernels.  Also the object-dtype path for wide integers."""
from __future__ import annotations

import numpy as np


def subset_sums(w):
    out = np.zeros(1, dtype=w.dtype)
    if w.dtype == object:
        out[0] = 0
    for x in w:
        out = np.concatenate([out, out + x])
    return out


def popcounts(k):
    out = np.zeros(1, dtype=np.uint8)
    for _ in range(k):
        out = np.concatenate([out, out + 1])
    return out


def two_pointer(a, b, t):
    if len(a) == 0 or len(b) == 0:
        return -1, -1
    need = t - b
    pos = np.searchsorted(a, need, side="right") - 1
    ok = pos >= 0
    hit = np.zeros(len(b), dtype=bool)
    hit[ok] = a[pos[ok]] == need[ok]
    js = np.flatnonzero(hit)
    if len(js) == 0:
        return -1, -1
    j = int(js[0])
    return int(pos[j]), j


def mod_pairs(a, b, p, r, cap):
    ra = a % p
    rb = b % p
    order = np.argsort(rb, kind="mergesort")
    srb = rb[order]
    need = (r - ra) % p
    lo = np.searchsorted(srb, need, side="left")
    hi = np.searchsorted(srb, need, side="right")
    counts = (hi - lo).astype(np.int64)
    total = int(counts.sum())
    if total > cap:
        return np.empty(0, np.int64), np.empty(0, np.int64), total
    ii = np.repeat(np.arange(len(a), dtype=np.int64), counts)
    # position within each run: global offset minus run start
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    within = np.arange(total, dtype=np.int64) - starts
    jj = order[np.repeat(lo, counts) + within].astype(np.int64)
    return ii, jj, total


def ov_first(a, b, block: int = 4096):
    if len(a) == 0 or len(b) == 0:
        return -1, -1
    rows = max(1, block // max(1, len(b)))
    for start in range(0, len(a), rows):
        chunk = a[start:start + rows]
        zero = (chunk[:, None] & b[None, :]) == 0
        flat = np.flatnonzero(zero.ravel())
        if len(flat):
            i, j = divmod(int(flat[0]), len(b))
            return start + i, j
    return -1, -1
