"""Instances, certificates, generation, file I/O and the ground-truth oracle."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

INT_BITS = 128
_INT_LIMIT = 1 << (INT_BITS - 1)

DP_MAX_N = 30
DP_BUDGET = 1 << 25


class OracleRefused(RuntimeError):
    """The oracle declined an instance that would exceed its memory budget."""


def _check_width(items: Sequence[int], target: int) -> None:
    mass = sum(abs(w) for w in items)
    if mass >= _INT_LIMIT or abs(target) >= _INT_LIMIT:
        raise ValueError(f"weights or target exceed {INT_BITS}-bit signed range")


@dataclass(frozen=True)
class SubsetSumInstance:
    items: tuple[int, ...]
    target: int
    planted: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(int(w) for w in self.items))
        object.__setattr__(self, "target", int(self.target))
        if self.planted is not None:
            object.__setattr__(self, "planted", tuple(sorted(int(i) for i in self.planted)))
        _check_width(self.items, self.target)

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def total(self) -> int:
        return sum(self.items)

    def complement(self) -> "SubsetSumInstance":
        """Same items, target ``w(I) - t``; solutions map to their complements."""
        return SubsetSumInstance(self.items, self.total - self.target)


@dataclass(frozen=True)
class KSumInstance:
    """k arrays and a target; one element per array must sum to it.

    Arrays may have different lengths (reductions from uneven splits produce
    them); ``N`` is the longest.
    """

    arrays: tuple[tuple[int, ...], ...]
    target: int = 0

    def __post_init__(self):
        arrays = tuple(tuple(int(x) for x in a) for a in self.arrays)
        if len(arrays) < 2:
            raise ValueError("k-SUM needs at least two arrays")
        object.__setattr__(self, "arrays", arrays)
        object.__setattr__(self, "target", int(self.target))

    @property
    def k(self) -> int:
        return len(self.arrays)

    @property
    def N(self) -> int:
        return max(len(a) for a in self.arrays)


@dataclass(frozen=True)
class SolutionCertificate:
    indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(int(i) for i in self.indices)))

    def __len__(self):
        return len(self.indices)


def verify_certificate(inst: SubsetSumInstance, cert: SolutionCertificate | Iterable[int]) -> bool:
    idx = cert.indices if isinstance(cert, SolutionCertificate) else tuple(cert)
    try:
        idx = [int(i) for i in idx]
    except (TypeError, ValueError):
        return False
    if len(set(idx)) != len(idx):
        return False
    if any(i < 0 or i >= inst.n for i in idx):
        return False
    return sum(inst.items[i] for i in idx) == inst.target


def verify_ksum(inst: KSumInstance, indices: Sequence[int]) -> bool:
    if indices is None or len(indices) != inst.k:
        return False
    for a, i in zip(inst.arrays, indices):
        if not 0 <= i < len(a):
            return False
    return sum(a[i] for a, i in zip(inst.arrays, indices)) == inst.target


def generate_instance(
    n: int,
    weight_bits: int = 32,
    planted: bool = True,
    solution_size: int | None = None,
    seed: int = 0,
    signed: bool = False,
) -> SubsetSumInstance:
    """Random instance; with ``planted`` the target is the sum of a random subset.

    The planted index set is kept on ``instance.planted``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if weight_bits < 1:
        raise ValueError("weight_bits must be >= 1")
    if weight_bits + (n + 1).bit_length() + 1 >= INT_BITS:
        raise ValueError(f"{n} weights of {weight_bits} bits may overflow {INT_BITS}-bit sums")
    if solution_size is not None and not 0 <= solution_size <= n:
        raise ValueError("solution_size must lie in [0, n]")
    rng = random.Random(seed)
    hi = 1 << weight_bits
    if signed:
        items = [rng.randrange(-hi + 1, hi) for _ in range(n)]
    else:
        items = [rng.randrange(1, hi) if hi > 1 else 1 for _ in range(n)]
    if planted:
        size = n // 2 if solution_size is None else solution_size
        chosen = tuple(sorted(rng.sample(range(n), size)))
        return SubsetSumInstance(items, sum(items[i] for i in chosen), planted=chosen)
    lo = sum(w for w in items if w < 0)
    top = sum(w for w in items if w > 0)
    return SubsetSumInstance(items, rng.randint(lo, top))


def dp_oracle(inst: SubsetSumInstance, budget: int = DP_BUDGET) -> SolutionCertificate | None:
    """Reachable-sums dynamic program with backtracking.

    Keeps the sorted distinct sums reachable with the first ``k`` items for
    every ``k``; pseudo-polynomial when weights are small, ``2^n``-bounded
    otherwise.  Refuses (``OracleRefused``) rather than risk the budget.
    """
    mass = sum(abs(w) for w in inst.items)
    if inst.n > DP_MAX_N and mass > budget:
        raise OracleRefused(f"n={inst.n} > {DP_MAX_N} and weight mass {mass} > budget {budget}")
    if abs(inst.target) > mass:
        return None
    wide = mass >= (1 << 62)
    levels = [np.zeros(1, dtype=object if wide else np.int64)]
    stored = 1
    for w in inst.items:
        prev = levels[-1]
        nxt = np.unique(np.concatenate([prev, prev + w]))
        stored += len(nxt)
        if stored > budget:
            raise OracleRefused(f"reachable-sum table exceeded {budget} entries")
        levels.append(nxt)

    def reachable(level: np.ndarray, x: int) -> bool:
        pos = int(np.searchsorted(level, x))
        return pos < len(level) and level[pos] == x

    t = inst.target
    if not reachable(levels[-1], t):
        return None
    chosen = []
    for k in range(inst.n, 0, -1):
        if reachable(levels[k - 1], t):
            continue
        chosen.append(k - 1)
        t -= inst.items[k - 1]
    return SolutionCertificate(chosen)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def dumps_instance(inst: SubsetSumInstance, fmt: str = "txt") -> str:
    if fmt == "json":
        doc = {"items": list(inst.items), "target": inst.target}
        if inst.planted is not None:
            doc["planted_indices"] = list(inst.planted)
        return json.dumps(doc) + "\n"
    if fmt != "txt":
        raise ValueError(f"unknown instance format {fmt!r}")
    return f"{inst.n} {inst.target}\n{' '.join(str(w) for w in inst.items)}\n"


def loads_instance(text: str) -> SubsetSumInstance:
    stripped = text.strip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        return SubsetSumInstance(doc["items"], doc["target"], planted=doc.get("planted_indices"))
    lines = stripped.splitlines()
    if not lines:
        raise ValueError("empty instance file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n t'")
    n, t = int(head[0]), int(head[1])
    items = [int(tok) for line in lines[1:] for tok in line.split()]
    if len(items) != n:
        raise ValueError(f"header says {n} weights, found {len(items)}")
    return SubsetSumInstance(items, t)


def read_instance(path: str | Path) -> SubsetSumInstance:
    return loads_instance(Path(path).read_text())


def write_instance(inst: SubsetSumInstance, path: str | Path, fmt: str | None = None) -> None:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "txt"
    path.write_text(dumps_instance(inst, fmt))
