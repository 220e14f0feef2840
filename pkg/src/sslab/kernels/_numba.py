"""numba kernels.  int64 inputs only; callers route wider values to numpy."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def subset_sums(w):
    k = len(w)
    out = np.zeros(1 << k, dtype=np.int64)
    for i in range(k):
        half = 1 << i
        x = w[i]
        for m in range(half):
            out[half + m] = out[m] + x
    return out


@njit(cache=True)
def popcounts(k):
    out = np.zeros(1 << k, dtype=np.uint8)
    for i in range(k):
        half = 1 << i
        for m in range(half):
            out[half + m] = out[m] + 1
    return out


@njit(cache=True)
def two_pointer(a, b, t):
    i = len(a) - 1
    j = 0
    while i >= 0 and j < len(b):
        s = a[i] + b[j]
        if s == t:
            return i, j
        if s > t:
            i -= 1
        else:
            j += 1
    return -1, -1


@njit(cache=True)
def _pymod(x, p):
    m = x % p
    if m < 0:
        m += p
    return m


@njit(cache=True)
def mod_pairs(a, b, p, r, cap):
    na = len(a)
    nb = len(b)
    rb = np.empty(nb, dtype=np.int64)
    for j in range(nb):
        rb[j] = _pymod(b[j], p)
    order = np.argsort(rb, kind="mergesort")
    srb = rb[order]
    lo = np.empty(na, dtype=np.int64)
    hi = np.empty(na, dtype=np.int64)
    total = 0
    for i in range(na):
        need = _pymod(r - _pymod(a[i], p), p)
        lo[i] = np.searchsorted(srb, need, side="left")
        hi[i] = np.searchsorted(srb, need, side="right")
        total += hi[i] - lo[i]
    if total > cap:
        return np.empty(0, np.int64), np.empty(0, np.int64), total
    ii = np.empty(total, dtype=np.int64)
    jj = np.empty(total, dtype=np.int64)
    pos = 0
    for i in range(na):
        for q in range(lo[i], hi[i]):
            ii[pos] = i
            jj[pos] = order[q]
            pos += 1
    return ii, jj, total


@njit(cache=True)
def ov_first(a, b):
    zero = np.uint64(0)
    for i in range(len(a)):
        x = a[i]
        for j in range(len(b)):
            if x & b[j] == zero:
                return i, j
    return -1, -1


# ---------------------------------------------------------------------------
# Sorted pairwise-sum streams.  Heap items are ordered by
# (sign * sum, left_index, right_index); keys are unique, so the emission
# sequence matches the heapq-based SortedSumStream exactly.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _less(hs, hl, hr, x, y):
    if hs[x] != hs[y]:
        return hs[x] < hs[y]
    if hl[x] != hl[y]:
        return hl[x] < hl[y]
    return hr[x] < hr[y]


@njit(cache=True)
def _swap(hs, hl, hr, hk, hc, x, y):
    hs[x], hs[y] = hs[y], hs[x]
    hl[x], hl[y] = hl[y], hl[x]
    hr[x], hr[y] = hr[y], hr[x]
    hk[x], hk[y] = hk[y], hk[x]
    hc[x], hc[y] = hc[y], hc[x]


@njit(cache=True)
def _sift_down(hs, hl, hr, hk, hc, size, pos):
    while True:
        left = 2 * pos + 1
        if left >= size:
            return
        best = left
        right = left + 1
        if right < size and _less(hs, hl, hr, right, left):
            best = right
        if _less(hs, hl, hr, best, pos):
            _swap(hs, hl, hr, hk, hc, best, pos)
            pos = best
        else:
            return


@njit(cache=True)
def _sift_up(hs, hl, hr, hk, hc, pos):
    while pos > 0:
        parent = (pos - 1) // 2
        if _less(hs, hl, hr, pos, parent):
            _swap(hs, hl, hr, hk, hc, pos, parent)
            pos = parent
        else:
            return


@njit(cache=True)
def _stream_init(left, right, sign):
    lk = left * sign
    rk = right * sign
    lo = np.argsort(lk, kind="mergesort")
    ro = np.argsort(rk, kind="mergesort")
    row_is_left = len(left) <= len(right)
    if row_is_left:
        rows, cols, rv, cv = lo, ro, lk, rk
    else:
        rows, cols, rv, cv = ro, lo, rk, lk
    nrows = len(rows)
    hs = np.empty(nrows, dtype=np.int64)
    hl = np.empty(nrows, dtype=np.int64)
    hr = np.empty(nrows, dtype=np.int64)
    hk = np.empty(nrows, dtype=np.int64)
    hc = np.empty(nrows, dtype=np.int64)
    size = 0
    if len(cols) > 0:
        for k in range(nrows):
            hs[k] = rv[rows[k]] + cv[cols[0]]
            if row_is_left:
                hl[k] = rows[k]
                hr[k] = cols[0]
            else:
                hl[k] = cols[0]
                hr[k] = rows[k]
            hk[k] = k
            hc[k] = 0
        size = nrows
        for pos in range(size // 2 - 1, -1, -1):
            _sift_down(hs, hl, hr, hk, hc, size, pos)
    # meta: size, pops, peak
    meta = np.zeros(3, dtype=np.int64)
    meta[0] = size
    meta[2] = size
    return rows, cols, rv, cv, row_is_left, hs, hl, hr, hk, hc, meta


@njit(cache=True)
def _stream_pop(st):
    rows, cols, rv, cv, row_is_left, hs, hl, hr, hk, hc, meta = st
    size = meta[0]
    key = hs[0]
    li = hl[0]
    ri = hr[0]
    k = hk[0]
    c = hc[0] + 1
    meta[1] += 1
    if c < len(cols):
        hs[0] = rv[rows[k]] + cv[cols[c]]
        if row_is_left:
            hr[0] = cols[c]
        else:
            hl[0] = cols[c]
        hc[0] = c
    else:
        size -= 1
        if size > 0:
            _swap(hs, hl, hr, hk, hc, 0, size)
        meta[0] = size
    if meta[0] > 0:
        _sift_down(hs, hl, hr, hk, hc, meta[0], 0)
    return key, li, ri


@njit(cache=True)
def ss_find(a1, a2, b1, b2, t):
    """One (i1, i2, i3, i4) with a1+a2+b1+b2 == t; increasing over a, decreasing over b."""
    inc = _stream_init(a1, a2, np.int64(1))
    dec = _stream_init(b1, b2, np.int64(-1))
    res = np.full(4, -1, dtype=np.int64)
    mi = inc[10]
    md = dec[10]
    while mi[0] > 0 and md[0] > 0:
        x = inc[5][0]
        y = -dec[5][0]
        s = x + y
        if s == t:
            res[0] = inc[6][0]
            res[1] = inc[7][0]
            res[2] = dec[6][0]
            res[3] = dec[7][0]
            break
        if s < t:
            _stream_pop(inc)
        else:
            _stream_pop(dec)
    pops = mi[1] + md[1]
    peak = mi[2] + md[2]
    return res, pops, peak


@njit(cache=True)
def ss_enumerate(a1, a2, b1, b2, t, cap, out, start):
    """Write every tuple with total ``t`` into ``out[start:]`` until ``cap`` rows are used.

    Returns (next_row, pops, peak).
    """
    inc = _stream_init(a1, a2, np.int64(1))
    dec = _stream_init(b1, b2, np.int64(-1))
    mi = inc[10]
    md = dec[10]
    row = start
    gi1 = np.empty(16, dtype=np.int64)
    gi2 = np.empty(16, dtype=np.int64)
    gd1 = np.empty(16, dtype=np.int64)
    gd2 = np.empty(16, dtype=np.int64)
    while mi[0] > 0 and md[0] > 0 and row < cap:
        x = inc[5][0]
        y = -dec[5][0]
        s = x + y
        if s < t:
            _stream_pop(inc)
            continue
        if s > t:
            _stream_pop(dec)
            continue
        ni = 0
        while mi[0] > 0 and inc[5][0] == x:
            if ni == len(gi1):
                gi1 = np.concatenate((gi1, np.empty(ni, dtype=np.int64)))
                gi2 = np.concatenate((gi2, np.empty(ni, dtype=np.int64)))
            gi1[ni] = inc[6][0]
            gi2[ni] = inc[7][0]
            ni += 1
            _stream_pop(inc)
        nd = 0
        while md[0] > 0 and -dec[5][0] == y:
            if nd == len(gd1):
                gd1 = np.concatenate((gd1, np.empty(nd, dtype=np.int64)))
                gd2 = np.concatenate((gd2, np.empty(nd, dtype=np.int64)))
            gd1[nd] = dec[6][0]
            gd2[nd] = dec[7][0]
            nd += 1
            _stream_pop(dec)
        for u in range(ni):
            for v in range(nd):
                if row >= cap:
                    break
                out[row, 0] = gi1[u]
                out[row, 1] = gi2[u]
                out[row, 2] = gd1[v]
                out[row, 3] = gd2[v]
                row += 1
    return row, mi[1] + md[1], mi[2] + md[2]


@njit(cache=True)
def ss_exact_labels(a1, a2, b1, b2, a, labels, nlabels):
    """Distinct ``labels[i4]`` over tuples of total ``a``, with one witness each.

    Increasing stream over (a1, a2), decreasing over (b1, b2); the first
    stream is only advanced while its head is too small, never past a match.
    """
    inc = _stream_init(a1, a2, np.int64(1))
    dec = _stream_init(b1, b2, np.int64(-1))
    mi = inc[10]
    md = dec[10]
    used = np.zeros(nlabels, dtype=np.bool_)
    out = np.empty((nlabels, 4), dtype=np.int64)
    row = 0
    while md[0] > 0:
        d2 = -dec[5][0]
        i3 = dec[6][0]
        i4 = dec[7][0]
        _stream_pop(dec)
        while mi[0] > 0 and inc[5][0] + d2 < a:
            _stream_pop(inc)
        if mi[0] == 0:
            break
        if inc[5][0] + d2 == a:
            lab = labels[i4]
            if not used[lab]:
                used[lab] = True
                out[row, 0] = inc[6][0]
                out[row, 1] = inc[7][0]
                out[row, 2] = i3
                out[row, 3] = i4
                row += 1
    return out[:row], mi[1] + md[1], mi[2] + md[2]
