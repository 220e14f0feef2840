"""Mixer measurement: distinct subset sums, epsilon, best layer, and triple sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .core import SubsetSumInstance

MIXER_CAP = 26


def _sums_and_sizes(items: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    if len(items) > MIXER_CAP:
        raise ValueError(f"mixer measurement capped at {MIXER_CAP} items")
    sums = kernels.subset_sums(kernels.as_int_array(items))
    return sums, kernels.popcounts(len(items))


def weight_count(items: Sequence[int]) -> int:
    """Number of distinct subset sums, ``|w(2^S)|``."""
    sums, _ = _sums_and_sizes(items)
    return len(np.unique(sums))


def epsilon_of(items: Sequence[int]) -> float:
    """Defect with ``|w(2^S)| = 2^((1 - eps)|S|)``; 0 for the empty set."""
    if not items:
        return 0.0
    return 1 - math.log2(weight_count(items)) / len(items)


def layer_counts(items: Sequence[int]) -> list[int]:
    """``counts[k]`` is the number of distinct sums of k-subsets."""
    sums, sizes = _sums_and_sizes(items)
    return [len(np.unique(sums[sizes == k])) for k in range(len(items) + 1)]


def best_layer(items: Sequence[int]) -> tuple[int, int]:
    """``(k, count)`` with k in ``[1, |S|/2]`` maximising distinct k-subset sums.

    Ties go to the smaller k.  A singleton uses k = 1 (the layer mirrored from
    k = 0); the empty set returns ``(0, 1)``.
    """
    if not items:
        return 0, 1
    counts = layer_counts(items)
    top = max(1, len(items) // 2)
    k = max(range(1, top + 1), key=lambda j: (counts[j], -j))
    return k, counts[k]


@dataclass(frozen=True)
class MixerReport:
    indices: tuple[int, ...]
    epsilon: float
    best_k: int
    weight_count: int


@dataclass(frozen=True)
class MixerTriple:
    left: MixerReport
    middle: MixerReport
    right: MixerReport

    @property
    def eps(self) -> float:
        return self.middle.epsilon

    def used(self) -> set[int]:
        return set(self.left.indices) | set(self.middle.indices) | set(self.right.indices)


def measure(inst: SubsetSumInstance, indices: Sequence[int]) -> MixerReport:
    idx = tuple(sorted(int(i) for i in indices))
    w = [inst.items[i] for i in idx]
    if not w:
        return MixerReport(idx, 0.0, 0, 1)
    k, _ = best_layer(w)
    wc = weight_count(w)
    return MixerReport(idx, 1 - math.log2(wc) / len(w), k, wc)


def sample_mixers(inst: SubsetSumInstance, beta: float, rng: np.random.Generator) -> MixerTriple:
    """Three disjoint uniform ``floor(beta*n)``-subsets; the smallest epsilon goes in the middle."""
    size = math.floor(beta * inst.n + 1e-12)
    if 3 * size > inst.n:
        raise ValueError("three mixers do not fit in the instance")
    perm = rng.permutation(inst.n)
    reports = [measure(inst, perm[j * size:(j + 1) * size]) for j in range(3)]
    mid = min(range(3), key=lambda j: (reports[j].epsilon, j))
    rest = [reports[j] for j in range(3) if j != mid]
    return MixerTriple(rest[0], reports[mid], rest[1])
