"""Sorted pairwise-sum streams and the meet-in-the-middle solvers built on them.

``SortedSumStream`` is the reference heap implementation.  When numba is
active and the weights fit in int64, the 4-list searches run in compiled
kernels that reproduce the stream's emission order exactly.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from . import kernels
from .core import KSumInstance, SolutionCertificate, SubsetSumInstance
from .numtheory import crt_combine

INCREASING = "increasing"
DECREASING = "decreasing"

HS_MAX_N = 44
SS_MAX_N = 64


@dataclass
class Counters:
    """Instrumentation shared by solvers and the bench harness."""

    peak_entries: int = 0
    pops: int = 0
    extra: dict = field(default_factory=dict)

    def bump(self, key: str, by: int = 1) -> None:
        self.extra[key] = self.extra.get(key, 0) + by

    def peak(self, entries: int) -> None:
        self.peak_entries = max(self.peak_entries, int(entries))

    def to_dict(self) -> dict:
        return {"peak_entries": self.peak_entries, "pops": self.pops, **self.extra}


class SortedSumStream:
    """All sums ``left[i] + right[j]`` in sorted order, one pair at a time.

    The frontier holds one cursor per element of the shorter list, so it
    never exceeds ``min(len(left), len(right))`` entries.  Equal sums come
    out in ``(i, j)`` order (decreasing streams too).
    """

    def __init__(self, left: Sequence[int], right: Sequence[int], direction: str = INCREASING):
        if direction not in (INCREASING, DECREASING):
            raise ValueError(f"direction must be {INCREASING!r} or {DECREASING!r}")
        self.direction = direction
        self.left = [int(x) for x in left]
        self.right = [int(x) for x in right]
        self._sign = 1 if direction == INCREASING else -1
        sg = self._sign
        lo = sorted(range(len(self.left)), key=lambda i: (sg * self.left[i], i))
        ro = sorted(range(len(self.right)), key=lambda j: (sg * self.right[j], j))
        self._row_is_left = len(lo) <= len(ro)
        self._rows, self._cols = (lo, ro) if self._row_is_left else (ro, lo)
        self._heap: list[tuple[int, int, int, int, int]] = []
        if self._cols:
            for k in range(len(self._rows)):
                self._heap.append(self._item(k, 0))
            heapq.heapify(self._heap)
        self.pops = 0
        self.peak_frontier = len(self._heap)

    def _item(self, k: int, c: int) -> tuple[int, int, int, int, int]:
        r, col = self._rows[k], self._cols[c]
        i, j = (r, col) if self._row_is_left else (col, r)
        return self._sign * (self.left[i] + self.right[j]), i, j, k, c

    def __len__(self) -> int:
        return len(self.left) * len(self.right)

    @property
    def frontier_size(self) -> int:
        return len(self._heap)

    def peek(self) -> tuple[int, int, int] | None:
        if not self._heap:
            return None
        key, i, j, _, _ = self._heap[0]
        return self._sign * key, i, j

    def pop(self) -> tuple[int, int, int] | None:
        """Next ``(sum, left_index, right_index)``, or ``None`` when exhausted."""
        if not self._heap:
            return None
        key, i, j, k, c = self._heap[0]
        if c + 1 < len(self._cols):
            heapq.heapreplace(self._heap, self._item(k, c + 1))
        else:
            heapq.heappop(self._heap)
        self.pops += 1
        return self._sign * key, i, j

    def __iter__(self):
        while (item := self.pop()) is not None:
            yield item


def make_stream(q1: Sequence[int], q2: Sequence[int], direction: str = INCREASING) -> SortedSumStream:
    return SortedSumStream(q1, q2, direction)


def pop(stream: SortedSumStream) -> tuple[int, int, int] | None:
    return stream.pop()


# ---------------------------------------------------------------------------
# 2-SUM and the subset-sum splits
# ---------------------------------------------------------------------------


def _is_sorted(a: Sequence[int]) -> bool:
    return all(a[i] <= a[i + 1] for i in range(len(a) - 1))


def two_sum(a: Sequence[int], b: Sequence[int], t: int) -> tuple[int, int] | None:
    """Two-pointer 2-SUM over ascending inputs: ``a`` walked down, ``b`` walked up."""
    if not _is_sorted(a) or not _is_sorted(b):
        raise ValueError("two_sum inputs must be sorted ascending")
    i, j = kernels.two_pointer(kernels.as_int_array(a, t), kernels.as_int_array(b, t), t)
    return None if i < 0 else (i, j)


def split_sizes(n: int, parts: int) -> list[int]:
    """Part sizes, larger parts first: ceil/floor of n / parts."""
    q, r = divmod(n, parts)
    return [q + 1] * r + [q] * (parts - r)


def split_indices(n: int, parts: int) -> list[list[int]]:
    out, start = [], 0
    for size in split_sizes(n, parts):
        out.append(list(range(start, start + size)))
        start += size
    return out


def part_sums(items: Sequence[int], idx: Sequence[int]) -> np.ndarray:
    """Subset sums of ``items[idx]``; position = bitmask over ``idx``."""
    return kernels.subset_sums(kernels.as_int_array([items[i] for i in idx]))


def mask_to_indices(mask: int, idx: Sequence[int]) -> list[int]:
    return [idx[b] for b in range(len(idx)) if mask >> b & 1]


def horowitz_sahni(inst: SubsetSumInstance, counters: Counters | None = None,
                   max_n: int = HS_MAX_N) -> SolutionCertificate | None:
    """Two half tables of all subset sums, then one 2-SUM sweep."""
    if inst.n > max_n:
        raise ValueError(f"horowitz_sahni capped at n={max_n}")
    counters = counters if counters is not None else Counters()
    left, right = split_indices(inst.n, 2)
    a = part_sums(inst.items, left)
    b = part_sums(inst.items, right)
    oa = np.argsort(a, kind="mergesort")
    ob = np.argsort(b, kind="mergesort")
    counters.peak(len(a) + len(b))
    i, j = kernels.two_pointer(a[oa], b[ob], inst.target)
    counters.pops += len(a) + len(b)
    if i < 0:
        return None
    return SolutionCertificate(mask_to_indices(int(oa[i]), left) + mask_to_indices(int(ob[j]), right))


# ---------------------------------------------------------------------------
# four-list searches (kernel or heap streams)
# ---------------------------------------------------------------------------


def _four_arrays(lists: Sequence[Sequence[int]], extra: int = 0) -> list[np.ndarray]:
    bound = sum(max((abs(int(x)) for x in a), default=0) for a in lists) + abs(extra)
    arrs = [kernels.as_int_array(a) for a in lists]
    if bound >= kernels.INT64_SAFE:
        arrs = [np.asarray([int(x) for x in a], dtype=object) for a in arrs]
    return arrs


def _use_kernel(arrs: Sequence[np.ndarray]) -> bool:
    return kernels.JIT_ENABLED and all(a.dtype == np.int64 for a in arrs)


def _find_py(a1, a2, b1, b2, t):
    inc = SortedSumStream(a1, a2, INCREASING)
    dec = SortedSumStream(b1, b2, DECREASING)
    res = None
    while True:
        x, y = inc.peek(), dec.peek()
        if x is None or y is None:
            break
        s = x[0] + y[0]
        if s == t:
            res = (x[1], x[2], y[1], y[2])
            break
        if s < t:
            inc.pop()
        else:
            dec.pop()
    return res, inc.pops + dec.pops, inc.peak_frontier + dec.peak_frontier


def _find(lists, t, counters: Counters):
    arrs = _four_arrays(lists, t)
    if _use_kernel(arrs):
        res, pops, peak = kernels._numba.ss_find(*arrs, np.int64(t))
        res = None if res[0] < 0 else tuple(int(x) for x in res)
    else:
        res, pops, peak = _find_py(*arrs, t)
    counters.pops += int(pops)
    return res, int(peak)


def _enumerate_py(a1, a2, b1, b2, t, cap):
    inc = SortedSumStream(a1, a2, INCREASING)
    dec = SortedSumStream(b1, b2, DECREASING)
    out: list[tuple[int, int, int, int]] = []
    while len(out) < cap:
        x, y = inc.peek(), dec.peek()
        if x is None or y is None:
            break
        s = x[0] + y[0]
        if s < t:
            inc.pop()
            continue
        if s > t:
            dec.pop()
            continue
        gx = []
        while (h := inc.peek()) is not None and h[0] == x[0]:
            gx.append(h[1:])
            inc.pop()
        gy = []
        while (h := dec.peek()) is not None and h[0] == y[0]:
            gy.append(h[1:])
            dec.pop()
        for u in gx:
            for v in gy:
                if len(out) >= cap:
                    break
                out.append((u[0], u[1], v[0], v[1]))
    return out, inc.pops + dec.pops, inc.peak_frontier + dec.peak_frontier


def _enumerate(arrs, t, cap, counters: Counters):
    """All index 4-tuples with total exactly ``t`` (at most ``cap``)."""
    if cap <= 0:
        return []
    if _use_kernel(arrs) and abs(t) < kernels.INT64_SAFE:
        out = np.empty((cap, 4), dtype=np.int64)
        rows, pops, peak = kernels._numba.ss_enumerate(*arrs, np.int64(t), np.int64(cap), out, np.int64(0))
        found = [tuple(int(x) for x in r) for r in out[:rows]]
    else:
        found, pops, peak = _enumerate_py(*arrs, t, cap)
    counters.pops += int(pops)
    counters.peak(int(peak) + sum(len(a) for a in arrs) + len(found))
    return found


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------


def schroeppel_shamir(inst: SubsetSumInstance, counters: Counters | None = None,
                      max_n: int = SS_MAX_N) -> SolutionCertificate | None:
    """Four quarter tables; increasing stream over the first two, decreasing over the rest."""
    if inst.n > max_n:
        raise ValueError(f"schroeppel_shamir capped at n={max_n}")
    counters = counters if counters is not None else Counters()
    parts = split_indices(inst.n, 4)
    lists = [part_sums(inst.items, idx) for idx in parts]
    res, peak = _find(lists, inst.target, counters)
    counters.peak(peak + sum(len(a) for a in lists))
    if res is None:
        return None
    chosen = []
    for mask, idx in zip(res, parts):
        chosen += mask_to_indices(mask, idx)
    return SolutionCertificate(chosen)


def four_sum(arrays: KSumInstance, t: int | None = None,
             counters: Counters | None = None) -> tuple[int, int, int, int] | None:
    """Indices ``(i1, i2, i3, i4)`` with ``A1[i1] + ... + A4[i4] == t``."""
    if arrays.k != 4:
        raise ValueError("four_sum needs exactly 4 arrays")
    t = arrays.target if t is None else t
    counters = counters if counters is not None else Counters()
    res, peak = _find(arrays.arrays, t, counters)
    counters.peak(peak)
    return res


def shamir_for_rings(q_families: Sequence[Sequence[int]], r: int, p: int, s: int, q: int,
                     m: int | None = None, counters: Counters | None = None) -> list[tuple[int, int, int, int]]:
    """Up to ``m`` index tuples whose total weight is ``r`` mod ``p`` and ``s`` mod ``q``.

    Weights are reduced into ``[0, pq)``; the residue class ``v`` then has
    exactly four candidate totals ``v, v+pq, v+2pq, v+3pq``, each searched
    with the sorted streams.
    """
    if len(q_families) != 4:
        raise ValueError("need four families")
    counters = counters if counters is not None else Counters()
    v = crt_combine(r % p, p, s % q, q)
    pq = p * q
    reduced = [[int(w) % pq for w in fam] for fam in q_families]
    total = 1
    for fam in reduced:
        total *= len(fam)
    cap = total if m is None else min(m, total)
    arrs = _four_arrays(reduced, 4 * pq)
    out: list[tuple[int, int, int, int]] = []
    for k in range(4):
        if len(out) >= cap:
            break
        out += _enumerate(arrs, v + k * pq, cap - len(out), counters)
    return out


def faster_shamir(q_families: Sequence[Sequence[int]], a: int, payloads: Sequence[Hashable],
                  counters: Counters | None = None, witnesses: bool = False):
    """Distinct payloads of the fourth family over tuples of total weight exactly ``a``.

    Returns ``[(a, payload), ...]``; with ``witnesses=True`` each entry also
    carries one index tuple that produced it.
    """
    if len(q_families) != 4:
        raise ValueError("need four families")
    if len(payloads) != len(q_families[3]):
        raise ValueError("one payload per member of the fourth family")
    counters = counters if counters is not None else Counters()
    label_of: dict[Hashable, int] = {}
    labels = np.array([label_of.setdefault(pl, len(label_of)) for pl in payloads], dtype=np.int64)
    by_label = list(label_of)
    arrs = _four_arrays(q_families, a)
    if _use_kernel(arrs) and abs(a) < kernels.INT64_SAFE:
        rows, pops, peak = kernels._numba.ss_exact_labels(*arrs, np.int64(a), labels, np.int64(len(by_label)))
        found = [tuple(int(x) for x in r) for r in rows]
    else:
        found, pops, peak = _exact_py(*arrs, a, labels, len(by_label))
    counters.pops += int(pops)
    counters.peak(int(peak) + sum(len(x) for x in arrs) + len(found) + len(by_label))
    out = []
    for tup in found:
        pl = by_label[labels[tup[3]]]
        out.append((a, pl, tup) if witnesses else (a, pl))
    return out


def _exact_py(a1, a2, b1, b2, a, labels, nlabels):
    d1 = SortedSumStream(a1, a2, INCREASING)
    d2 = SortedSumStream(b1, b2, DECREASING)
    used = [False] * nlabels
    found = []
    for s2, i3, i4 in d2:
        while (h := d1.peek()) is not None and h[0] + s2 < a:
            d1.pop()
        if h is None:
            break
        if h[0] + s2 == a and not used[labels[i4]]:
            used[labels[i4]] = True
            found.append((h[1], h[2], i3, i4))
    return found, d1.pops + d2.pops, d1.peak_frontier + d2.peak_frontier


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------


def reduce_subsetsum_to_4sum(inst: SubsetSumInstance) -> KSumInstance:
    """Four arrays of all subset sums of the four parts; position = bitmask in the part."""
    parts = split_indices(inst.n, 4)
    arrays = [tuple(int(x) for x in part_sums(inst.items, idx)) for idx in parts]
    return KSumInstance(tuple(arrays), inst.target)


def certificate_from_4sum(inst: SubsetSumInstance, quad: Sequence[int]) -> SolutionCertificate:
    chosen = []
    for mask, idx in zip(quad, split_indices(inst.n, 4)):
        chosen += mask_to_indices(int(mask), idx)
    return SolutionCertificate(chosen)


def reduce_2ksum_to_4sum(inst: KSumInstance) -> KSumInstance:
    """Group 2k arrays (k even) into four blocks of k/2; each output array lists
    every one-per-array sum of its block in lexicographic index order."""
    if inst.k % 4 != 0:
        raise ValueError("2k-SUM with even k needs a multiple of four arrays")
    if any(len(a) == 0 for a in inst.arrays):
        raise ValueError("empty input array")
    g = inst.k // 4
    out = []
    for block in range(4):
        group = inst.arrays[block * g:(block + 1) * g]
        out.append(tuple(sum(c) for c in itertools.product(*group)))
    return KSumInstance(tuple(out), inst.target)


def unflatten_2ksum(inst: KSumInstance, quad: Sequence[int]) -> tuple[int, ...]:
    """Map 4-SUM indices of the grouped instance back to one index per original array."""
    g = inst.k // 4
    out: list[int] = []
    for block, flat in enumerate(quad):
        sizes = [len(a) for a in inst.arrays[block * g:(block + 1) * g]]
        digits = []
        for size in reversed(sizes):
            flat, d = divmod(flat, size)
            digits.append(d)
        out += reversed(digits)
    return tuple(out)
