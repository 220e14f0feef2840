"""Weighted orthogonal vectors by weight grouping, plus a baseline OV scan."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels

MAX_UNIVERSE = 64


class Entry(NamedTuple):
    mask: int
    weight: int
    payload: Any = None


@dataclass
class WeightedSetFamily:
    universe_size: int
    entries: list[Entry] = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.universe_size <= MAX_UNIVERSE:
            raise ValueError(f"universe size must lie in [0, {MAX_UNIVERSE}]")
        self.entries = [e if isinstance(e, Entry) else Entry(*e) for e in self.entries]
        limit = 1 << self.universe_size
        for e in self.entries:
            if not 0 <= e.mask < limit:
                raise ValueError(f"mask {e.mask:#x} does not fit {self.universe_size} bits")

    def add(self, mask: int, weight: int, payload: Any = None) -> None:
        if not 0 <= mask < 1 << self.universe_size:
            raise ValueError("mask out of range")
        self.entries.append(Entry(int(mask), int(weight), payload))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @classmethod
    def from_pairs(cls, d: int, pairs: Iterable[tuple[int, int]]) -> "WeightedSetFamily":
        return cls(d, [Entry(m, w) for m, w in pairs])


def solve_ov(a_masks: Sequence[int], b_masks: Sequence[int]) -> tuple[int, int] | None:
    """First disjoint pair in row-major order (quadratic scan)."""
    if not len(a_masks) or not len(b_masks):
        return None
    i, j = kernels.ov_first(np.asarray(a_masks, dtype=np.uint64), np.asarray(b_masks, dtype=np.uint64))
    return None if i < 0 else (i, j)


def _groups(fam: WeightedSetFamily) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for k, e in enumerate(fam.entries):
        out.setdefault(e.weight, []).append(k)
    return out


def solve_wov(a_fam: WeightedSetFamily, b_fam: WeightedSetFamily, t: int,
              counters: dict | None = None) -> tuple[Entry, Entry] | None:
    """A disjoint pair with ``w_A + w_B == t``.

    Entries are grouped by exact weight; a two-pointer sweep over the sorted
    weight keys pairs each group ``a`` with ``t - a`` and hands the masks to OV.
    """
    ga, gb = _groups(a_fam), _groups(b_fam)
    ka, kb = sorted(ga), sorted(gb)
    i, j = 0, len(kb) - 1
    steps = 0
    calls = 0
    found = None
    while i < len(ka) and j >= 0:
        steps += 1
        s = ka[i] + kb[j]
        if s < t:
            i += 1
        elif s > t:
            j -= 1
        else:
            ia, ib = ga[ka[i]], gb[kb[j]]
            calls += 1
            hit = solve_ov([a_fam.entries[x].mask for x in ia], [b_fam.entries[y].mask for y in ib])
            if hit is not None:
                found = (a_fam.entries[ia[hit[0]]], b_fam.entries[ib[hit[1]]])
                break
            i += 1
            j -= 1
    if counters is not None:
        counters["wov_sweep_steps"] = counters.get("wov_sweep_steps", 0) + steps
        counters["ov_calls"] = counters.get("ov_calls", 0) + calls
    return found
