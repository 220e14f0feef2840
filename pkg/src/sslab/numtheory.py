"""Primality, random primes and Chinese remaindering."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

log = logging.getLogger(__name__)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# strong-pseudoprime bases over the first 13 primes are exact below this bound
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


def _strong_probable_prime(n: int, a: int) -> bool:
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1
    if isqrt(n) ** 2 == n:
        return False
    D = 5
    while _jacobi(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d = n + 1
    s = (d & -d).bit_length() - 1
    d >>= s
    inv2 = (n + 1) // 2
    U, V, Qk = 0, 2, 1
    for bit in bin(d)[2:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(k: int) -> bool:
    """Exact below 3.3e24 (Miller-Rabin over primes <= 41); Baillie-PSW above."""
    k = int(k)
    if k < 2:
        return False
    for p in _SMALL_PRIMES:
        if k % p == 0:
            return k == p
    if k < 43 * 43:
        return True
    if k < _MR_DETERMINISTIC_BOUND:
        return all(_strong_probable_prime(k, a) for a in _SMALL_PRIMES)
    return _strong_probable_prime(k, 2) and _strong_lucas(k)


@dataclass(frozen=True)
class PrimeSample:
    p: int
    range_lo: int
    range_hi: int
    probes: int
    clamped: bool = False


def randint(rng: np.random.Generator, lo: int, hi: int) -> int:
    """Uniform integer in ``[lo, hi]`` for arbitrarily large bounds."""
    span = hi - lo + 1
    if span <= 0:
        raise ValueError("empty range")
    if hi < (1 << 62) and lo > -(1 << 62):
        return int(rng.integers(lo, hi + 1))
    nbytes = (span.bit_length() + 7) // 8
    top = (1 << (8 * nbytes)) // span * span
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little")
        if x < top:
            return lo + x % span


def _sample_in(lo: int, hi: int, rng: np.random.Generator, clamped: bool) -> PrimeSample:
    probes = 0
    while True:
        probes += 1
        c = randint(rng, lo, hi)
        if is_prime(c):
            return PrimeSample(c, lo, hi, probes, clamped)


def random_prime(t: int, rng: np.random.Generator) -> PrimeSample:
    """Uniform random prime in ``[t, 2t]`` by rejection sampling."""
    t = int(t)
    clamped = t < 2
    if clamped:
        log.debug("random_prime: t=%d clamped to 2", t)
        t = 2
    return _sample_in(t, 2 * t, rng, clamped)


def random_prime_upto(n: int, rng: np.random.Generator) -> PrimeSample:
    """Uniform random prime in ``[2, n]`` (n clamped to at least 2)."""
    n = int(n)
    clamped = n < 2
    return _sample_in(2, max(n, 2), rng, clamped)


def crt_combine(a: int, p: int, b: int, q: int) -> int:
    """The unique ``x`` in ``[0, pq)`` with ``x = a mod p`` and ``x = b mod q``."""
    if p < 1 or q < 1:
        raise ValueError("moduli must be positive")
    if gcd(p, q) != 1:
        raise ValueError(f"moduli {p} and {q} are not coprime")
    a %= p
    b %= q
    # p * (p^-1 mod q) is 1 mod q and 0 mod p
    u = pow(p, -1, q) if q > 1 else 0
    return (a + (b - a) * u % q * p) % (p * q)
