"""Acceptance suite: eight end-to-end criteria, one PASS/FAIL line each.

Run with ``pytest -m acceptance -s`` or directly as ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import math
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import brute_4tuples  # noqa: E402

from sslab.am import generate_4sum, simulate_protocol, solve_by_proof_enumeration  # noqa: E402
from sslab.core import dp_oracle, generate_instance, verify_certificate  # noqa: E402
from sslab.lowspace import Config, solve_lowspace  # noqa: E402
from sslab.params import entropy, verify_exponent_bounds, verify_wov_inequality  # noqa: E402
from sslab.streams import (  # noqa: E402
    DECREASING,
    INCREASING,
    Counters,
    SortedSumStream,
    certificate_from_4sum,
    faster_shamir,
    horowitz_sahni,
    reduce_subsetsum_to_4sum,
    schroeppel_shamir,
    shamir_for_rings,
)
from sslab.wov import WeightedSetFamily, solve_wov  # noqa: E402

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]

C1_INSTANCES = 1000
C1_AMPLIFY = 8


def c1_oracle_equivalence():
    rnd = random.Random(2024)
    false_pos = false_neg = 0
    yes = first_run_hits = amplified_hits = 0
    big_yes = big_hits = 0
    t0 = time.perf_counter()
    for seed in range(C1_INSTANCES):
        n = rnd.randint(1, 22)
        inst = generate_instance(n, weight_bits=rnd.choice([4, 10, 24, 40]),
                                 planted=rnd.random() < 0.5, seed=seed, signed=rnd.random() < 0.2)
        truth = dp_oracle(inst) is not None
        yes += truth
        big_yes += truth and n >= 16
        quad = solve_by_proof_enumeration(reduce_subsetsum_to_4sum(inst), np.random.default_rng(seed))
        answers = {
            "hs": horowitz_sahni(inst),
            "ss": schroeppel_shamir(inst),
            "am-enum": None if quad is None else certificate_from_4sum(inst, quad),
        }
        for cert in answers.values():
            if cert is not None and not verify_certificate(inst, cert):
                false_pos += 1
            if truth and cert is None:
                false_neg += 1
            if not truth and cert is not None:
                false_pos += 1
        for rep in range(C1_AMPLIFY):
            cert = solve_lowspace(inst, Config(seed=seed * C1_AMPLIFY + rep))
            if cert is not None and (not truth or not verify_certificate(inst, cert)):
                false_pos += 1
            if cert is not None:
                first_run_hits += rep == 0
                big_hits += rep == 0 and n >= 16
                amplified_hits += 1
                break
            if not truth and rep == 0:
                break  # one full run per no-instance suffices for the false-positive check
    elapsed = time.perf_counter() - t0
    per_run = first_run_hits / yes
    amplified = amplified_hits / yes
    ok = false_pos == 0 and false_neg == 0 and per_run >= 0.5 and amplified >= 0.99 and elapsed < 600
    return ok, (f"instances={C1_INSTANCES} yes={yes} fp={false_pos} fn={false_neg} "
                f"lowspace per-run={per_run:.3f} (n>=16: {big_hits}/{big_yes}) amplified={amplified:.3f} "
                f"time={elapsed:.0f}s")


def c2_exponents():
    t0 = time.perf_counter()
    rep = verify_exponent_bounds(grid_step=0.001)
    elapsed = time.perf_counter() - t0
    ok = (abs(rep.max_T - 0.5) <= 1e-9 and abs(rep.argmax_T - 0.5) <= 1e-9
          and rep.max_S <= 0.246 + 1e-9 and not rep.violations and elapsed < 10)
    return ok, f"max_T={rep.max_T:.12f} at alpha={rep.argmax_T} max_S={rep.max_S:.12f} time={elapsed:.2f}s"


def c3_wov_inequality():
    t0 = time.perf_counter()
    rep = verify_wov_inequality(mu_step=0.0005)
    elapsed = time.perf_counter() - t0
    bound = 1 - entropy(0.25)
    ok = rep.wov_max <= bound + 1e-9 and not rep.violations and elapsed < 10
    return ok, f"max={rep.wov_max:.12f} at mu={rep.argmax_mu} bound={bound:.12f} time={elapsed:.2f}s"


def c4_space_shape():
    ns = [16, 20, 24, 28]
    peaks = {"ss": [], "hs": []}
    for n in ns:
        inst = generate_instance(n, seed=n)
        for name, solver in (("ss", schroeppel_shamir), ("hs", horowitz_sahni)):
            c = Counters()
            solver(inst, c)
            peaks[name].append(c.peak_entries)
    slope = {k: float(np.polyfit(ns, np.log2(v), 1)[0]) for k, v in peaks.items()}
    ok = abs(slope["ss"] - 0.25) <= 0.05 and abs(slope["hs"] - 0.5) <= 0.05
    return ok, f"ss slope={slope['ss']:.4f} hs slope={slope['hs']:.4f}"


def c5_am_protocol():
    N = 512
    t0 = time.perf_counter()
    inst, idx = generate_4sum(N, seed=1)
    yes = simulate_protocol(inst, 500, rng=np.random.default_rng(1), planted=idx)
    no_inst, _ = generate_4sum(N, planted=False, seed=2)
    no = simulate_protocol(no_inst, 10_000, rng=np.random.default_rng(2))
    elapsed = time.perf_counter() - t0
    cap = 8 * N * math.log2(N) ** 3
    ok = yes.accept_rate >= 0.5 and no.accept_rate == 0 and yes.mean_a12 <= cap and elapsed < 300
    return ok, (f"accept={yes.accept_rate:.3f} no-accept={no.accept_rate} "
                f"mean_a12={yes.mean_a12:.0f} cap={cap:.0f} time={elapsed:.0f}s")


def c6_ring_oracles():
    rnd = random.Random(6)
    mismatches = 0
    t0 = time.perf_counter()
    primes = [3, 5, 7, 11, 13]
    for _ in range(100):
        fams = [[rnd.randint(-100, 100) for _ in range(rnd.randint(1, 8))] for _ in range(4)]
        p, q = rnd.sample(primes, 2)
        r, s = rnd.randrange(p), rnd.randrange(q)
        totals = {t: sum(f[i] for f, i in zip(fams, t)) for t in brute_4tuples(fams)}
        want = {t for t, v in totals.items() if v % p == r and v % q == s}
        got = shamir_for_rings(fams, r, p, s, q)
        mismatches += len(got) != len(set(got)) or set(got) != want

        pos = [[rnd.randint(0, 20) for _ in range(rnd.randint(1, 8))] for _ in range(4)]
        payloads = [rnd.randint(0, 3) for _ in pos[3]]
        a = rnd.randint(10, 60)
        want_fs = {payloads[t[3]] for t in brute_4tuples(pos) if sum(f[i] for f, i in zip(pos, t)) == a}
        got_fs = faster_shamir(pos, a, payloads)
        mismatches += sorted(x[1] for x in got_fs) != sorted(want_fs)
    elapsed = time.perf_counter() - t0
    return mismatches == 0 and elapsed < 60, f"configs=100 mismatches={mismatches} time={elapsed:.1f}s"


def _random_family(rnd, d, size, wmax):
    fam = WeightedSetFamily(d)
    dens = rnd.random()
    for _ in range(size):
        mask = sum(1 << b for b in range(d) if rnd.random() < dens)
        fam.add(mask, rnd.randint(0, wmax))
    return fam


def c7_wov_oracle():
    rnd = random.Random(7)
    mismatches = 0
    t0 = time.perf_counter()
    for _ in range(1000):
        d = rnd.randint(1, 16)
        wmax = rnd.choice([5, 50, 1000])
        A = _random_family(rnd, d, rnd.randint(0, 200), wmax)
        B = _random_family(rnd, d, rnd.randint(0, 200), wmax)
        t = rnd.randint(0, 2 * wmax)
        am = np.array([e.mask for e in A.entries], dtype=np.int64)
        bm = np.array([e.mask for e in B.entries], dtype=np.int64)
        aw = np.array([e.weight for e in A.entries], dtype=np.int64)
        bw = np.array([e.weight for e in B.entries], dtype=np.int64)
        exists = bool(np.any(((am[:, None] & bm[None, :]) == 0) & (aw[:, None] + bw[None, :] == t)))
        got = solve_wov(A, B, t)
        if got is None:
            mismatches += exists
        else:
            ea, eb = got
            mismatches += (ea.mask & eb.mask) != 0 or ea.weight + eb.weight != t or not exists
    elapsed = time.perf_counter() - t0
    return mismatches == 0 and elapsed < 60, f"instances=1000 mismatches={mismatches} time={elapsed:.1f}s"


def c8_stream_contract():
    rnd = random.Random(8)
    bad = 0
    for _ in range(1000):
        left = [rnd.randint(-30, 30) for _ in range(rnd.randint(0, 24))]
        right = [rnd.randint(-30, 30) for _ in range(rnd.randint(0, 24))]
        direction = rnd.choice([INCREASING, DECREASING])
        s = SortedSumStream(left, right, direction)
        bound = min(len(left), len(right))
        out = []
        while (x := s.pop()) is not None:
            bad += s.frontier_size > bound
            out.append(x)
        sums = [v for v, _, _ in out]
        bad += sums != sorted(sums, reverse=direction == DECREASING)
        bad += len(out) != len(left) * len(right)
        bad += len({(i, j) for _, i, j in out}) != len(out)
        bad += any(left[i] + right[j] != v for v, i, j in out)
        bad += s.peak_frontier > bound
    return bad == 0, f"streams=1000 violations={bad}"


CRITERIA = [
    ("C1 oracle equivalence", c1_oracle_equivalence),
    ("C2 exponent certification", c2_exponents),
    ("C3 WOV inequality", c3_wov_inequality),
    ("C4 space shape", c4_space_shape),
    ("C5 AM protocol", c5_am_protocol),
    ("C6 ring/exact stream oracles", c6_ring_oracles),
    ("C7 WOV oracle", c7_wov_oracle),
    ("C8 stream contract", c8_stream_contract),
]


def _line(name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.parametrize("name,check", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
