"""Public-coin prime-filtered 4-SUM protocol: honest prover, cutoff verifier, simulation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .core import KSumInstance, verify_ksum
from .numtheory import random_prime_upto

DEFAULT_CUTOFF_C = 8.0


@dataclass(frozen=True)
class ProtocolTranscript:
    prime: int
    proof: int
    accepted: bool
    a12_size: int
    a34_size: int
    cutoff: int | None
    certificate: tuple[int, int, int, int] | None = None
    work: int = 0


def cutoff_size(N: int, cutoff_c: float | None) -> int | None:
    """``floor(c * N * log2(N)^3)``; ``None`` disables the cutoff."""
    if cutoff_c is None:
        return None
    lg = math.log2(max(N, 2))
    return int(math.floor(cutoff_c * N * lg ** 3))


def prover_proof(inst: KSumInstance, planted: Sequence[int], p: int) -> int:
    """Honest proof: the first pair's partial sum reduced into ``[0, p)``."""
    if inst.k != 4:
        raise ValueError("protocol is defined for 4-SUM")
    if not verify_ksum(inst, planted):
        raise ValueError("planted indices are not a solution")
    return (inst.arrays[0][planted[0]] + inst.arrays[1][planted[1]]) % p


class _Prepared:
    """Sorted distinct values of every array, with a map back to an original index."""

    def __init__(self, inst: KSumInstance):
        if inst.k != 4:
            raise ValueError("protocol is defined for 4-SUM")
        self.inst = inst
        self.N = inst.N
        bound = 2 * sum(max((abs(x) for x in a), default=0) for a in inst.arrays) + abs(inst.target)
        wide = bound >= kernels.INT64_SAFE
        self.values: list[np.ndarray] = []
        self.back: list[np.ndarray] = []
        for arr in inst.arrays:
            raw = np.asarray(arr, dtype=object if wide else np.int64)
            vals, first = np.unique(raw, return_index=True)
            self.values.append(vals if not wide else vals.astype(object))
            self.back.append(first)
        self._lg = max(1, math.ceil(math.log2(max(self.N, 2))))

    def side(self, x: int, y: int, p: int, r: int, cap: int):
        a, b = self.values[x], self.values[y]
        ii, jj, total = kernels.mod_pairs(a, b, p, r, cap)
        return ii, jj, int(total)

    def run(self, p: int, r: int, cutoff: int | None) -> ProtocolTranscript:
        cap = kernels.INT64_SAFE if cutoff is None else cutoff
        t = self.inst.target
        work = (len(self.values[0]) + len(self.values[1])) * self._lg
        i1, i2, n12 = self.side(0, 1, p, r, cap)
        work += n12
        if n12 > cap:
            return ProtocolTranscript(p, r, False, n12, 0, cutoff, None, work)
        work += (len(self.values[2]) + len(self.values[3])) * self._lg
        i3, i4, n34 = self.side(2, 3, p, (t - r) % p, cap)
        work += n34
        if n34 > cap:
            return ProtocolTranscript(p, r, False, n12, n34, cutoff, None, work)
        v = self.values
        a12 = v[0][i1] + v[1][i2]
        a34 = v[2][i3] + v[3][i4]
        o12 = np.argsort(a12, kind="mergesort")
        o34 = np.argsort(a34, kind="mergesort")
        work += n12 * max(1, math.ceil(math.log2(max(n12, 2)))) + n34 * max(1, math.ceil(math.log2(max(n34, 2))))
        x, y = kernels.two_pointer(a12[o12], a34[o34], t)
        work += n12 + n34
        if x < 0:
            return ProtocolTranscript(p, r, False, n12, n34, cutoff, None, work)
        px, py = int(o12[x]), int(o34[y])
        cert = (int(self.back[0][i1[px]]), int(self.back[1][i2[px]]),
                int(self.back[2][i3[py]]), int(self.back[3][i4[py]]))
        if not verify_ksum(self.inst, cert):
            raise AssertionError("verifier produced an invalid certificate")
        return ProtocolTranscript(p, r, True, n12, n34, cutoff, cert, work)


def verifier(inst: KSumInstance, p: int, r: int,
             cutoff_c: float | None = DEFAULT_CUTOFF_C) -> ProtocolTranscript:
    """Filter both halves by residue, reject past the cutoff, then 2-SUM the survivors.

    Accepts only with a checked certificate, so no-instances are always rejected.
    """
    if p < 2:
        raise ValueError("prime must be >= 2")
    if not 0 <= r < p:
        raise ValueError("proof must lie in [0, p)")
    return _Prepared(inst).run(p, r, cutoff_size(inst.N, cutoff_c))


@dataclass
class SimulationStats:
    trials: int
    accept_rate: float
    mean_a12: float
    max_a12: int
    mean_work: float
    cutoff: int | None
    primes: list[int] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"trials": self.trials, "accept_rate": self.accept_rate,
                "mean_a12": self.mean_a12, "max_a12": self.max_a12,
                "mean_work": self.mean_work, "cutoff": self.cutoff}


def simulate_protocol(inst: KSumInstance, trials: int, cutoff_c: float | None = DEFAULT_CUTOFF_C,
                      rng: np.random.Generator | None = None,
                      planted: Sequence[int] | None = None) -> SimulationStats:
    """Repeat (shared prime, proof, verify).  Without ``planted`` the prover answers at random."""
    rng = rng if rng is not None else np.random.default_rng(0)
    prep = _Prepared(inst)
    cutoff = cutoff_size(inst.N, cutoff_c)
    acc = 0
    a12 = []
    work = 0
    primes = []
    for _ in range(trials):
        p = random_prime_upto(inst.N, rng).p
        r = prover_proof(inst, planted, p) if planted is not None else int(rng.integers(p))
        tr = prep.run(p, r, cutoff)
        acc += tr.accepted
        a12.append(tr.a12_size)
        work += tr.work
        primes.append(p)
    return SimulationStats(
        trials=trials,
        accept_rate=acc / trials if trials else 0.0,
        mean_a12=float(np.mean(a12)) if a12 else 0.0,
        max_a12=max(a12, default=0),
        mean_work=work / trials if trials else 0.0,
        cutoff=cutoff,
        primes=primes,
    )


def solve_by_proof_enumeration(inst: KSumInstance, rng: np.random.Generator | None = None,
                               retries: int = 3, cutoff_c: float | None = DEFAULT_CUTOFF_C,
                               stats: dict | None = None) -> tuple[int, int, int, int] | None:
    """Try every proof ``r`` in ``Z_p`` for fresh shared primes.

    The last round runs without the cutoff, so a yes-instance is always solved.
    """
    if retries < 1:
        raise ValueError("retries must be >= 1")
    rng = rng if rng is not None else np.random.default_rng(0)
    prep = _Prepared(inst)
    if any(len(v) == 0 for v in prep.values):
        return None
    for rnd in range(retries):
        last = rnd == retries - 1
        cutoff = None if last else cutoff_size(inst.N, cutoff_c)
        p = random_prime_upto(inst.N, rng).p
        for r in range(p):
            tr = prep.run(p, r, cutoff)
            if stats is not None:
                stats["verifier_calls"] = stats.get("verifier_calls", 0) + 1
                stats["work"] = stats.get("work", 0) + tr.work
            if tr.accepted:
                if stats is not None:
                    stats["rounds"] = rnd + 1
                return tr.certificate
    if stats is not None:
        stats["rounds"] = retries
    return None


def generate_4sum(N: int, bits: int | None = None, planted: bool = True, seed: int = 0,
                  target: int = 0) -> tuple[KSumInstance, tuple[int, int, int, int] | None]:
    """Four signed arrays of ``bits``-bit values (default ``4 * ceil(log2 N)``).

    Planted: one quadruple is forced to hit ``target``.  Unplanted: every value
    is even and the target is odd, which rules out any solution.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    bits = bits if bits is not None else 4 * max(1, math.ceil(math.log2(max(N, 2))))
    rng = np.random.default_rng(seed)
    hi = 1 << bits
    if planted:
        arrays = [rng.integers(-hi, hi, size=N).tolist() for _ in range(4)]
        idx = tuple(int(i) for i in rng.integers(0, N, size=4))
        arrays[3][idx[3]] = target - sum(arrays[k][idx[k]] for k in range(3))
        return KSumInstance(tuple(map(tuple, arrays)), target), idx
    arrays = [(2 * rng.integers(-hi // 2, hi // 2, size=N)).tolist() for _ in range(4)]
    return KSumInstance(tuple(map(tuple, arrays)), 2 * (target // 2) + 1), None
