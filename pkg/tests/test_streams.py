import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_4tuples
from sslab.core import KSumInstance, SubsetSumInstance, dp_oracle, generate_instance, verify_certificate, verify_ksum
from sslab.streams import (
    DECREASING,
    INCREASING,
    Counters,
    SortedSumStream,
    certificate_from_4sum,
    faster_shamir,
    four_sum,
    horowitz_sahni,
    make_stream,
    pop,
    reduce_2ksum_to_4sum,
    reduce_subsetsum_to_4sum,
    schroeppel_shamir,
    shamir_for_rings,
    split_sizes,
    two_sum,
    unflatten_2ksum,
)

SS_PEAK_CONSTANT = 6  # peak entries == 6 * 2^(n/4) for n divisible by 4


@pytest.mark.parametrize("a,b,t,expected", [([1, 2, 3], [-3, -2, 0], 0, (2, 0)), ([], [1], 4, None),
                                            ([5], [-5], 0, (0, 0)), ([1, 2], [3, 4], 100, None)])
def test_two_sum(a, b, t, expected):
    assert two_sum(a, b, t) == expected


def test_two_sum_unsorted():
    with pytest.raises(ValueError):
        two_sum([2, 1], [0], 3)


def test_two_sum_wide():
    big = 1 << 100
    assert two_sum([1, big], [-big, 5], 6) == (0, 1)


def test_stream_examples():
    assert [x[0] for x in make_stream([1, 3], [2, 4], INCREASING)] == [3, 5, 5, 7]
    s = make_stream([0], [0])
    assert pop(s) == (0, 0, 0) and pop(s) is None
    assert [x[0] for x in make_stream([1, 2], [10, 20], DECREASING)] == [22, 21, 12, 11]


def test_stream_tie_order():
    assert [x[1:] for x in make_stream([1, 1], [2, 2])] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert [x[1:] for x in make_stream([1, 1], [2, 2], DECREASING)] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_stream_bad_direction():
    with pytest.raises(ValueError):
        SortedSumStream([1], [2], "sideways")


def _check_stream(left, right, direction):
    s = SortedSumStream(left, right, direction)
    out = []
    while (x := s.peek()) is not None:
        assert s.frontier_size <= min(len(left), len(right)) + 1
        assert s.pop() == x
        out.append(x)
    sums = [x[0] for x in out]
    assert sums == sorted(sums, reverse=direction == DECREASING)
    assert len(out) == len(left) * len(right)
    assert sorted(x[1:] for x in out) == sorted(itertools.product(range(len(left)), range(len(right))))
    assert all(left[i] + right[j] == v for v, i, j in out)
    assert s.peak_frontier <= min(len(left), len(right)) + 1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-50, 50), max_size=64), st.lists(st.integers(-50, 50), max_size=64),
       st.sampled_from([INCREASING, DECREASING]))
def test_stream_property(left, right, direction):
    _check_stream(left, right, direction)


def test_hs_ss_dp_agree():
    rnd = random.Random(4)
    for seed in range(200):
        n = rnd.randint(1, 22)
        inst = generate_instance(n, weight_bits=rnd.choice([3, 8, 20, 40]), planted=rnd.random() < 0.5,
                                 seed=seed, signed=rnd.random() < 0.3)
        want = dp_oracle(inst) is not None
        for solver in (horowitz_sahni, schroeppel_shamir):
            cert = solver(inst)
            assert (cert is not None) == want, (solver.__name__, seed)
            assert cert is None or verify_certificate(inst, cert)


def test_trivial_targets():
    inst = generate_instance(20, seed=3)
    zero = SubsetSumInstance(inst.items, 0)
    assert horowitz_sahni(zero).indices == ()
    assert schroeppel_shamir(zero).indices == ()
    over = SubsetSumInstance(inst.items, inst.total + 1)
    assert horowitz_sahni(over) is None and schroeppel_shamir(over) is None


def test_planted_n20_hs():
    inst = generate_instance(20, seed=8)
    assert verify_certificate(inst, horowitz_sahni(inst))


def test_ss_peak_n24():
    c = Counters()
    schroeppel_shamir(generate_instance(24, seed=1), c)
    assert c.peak_entries <= SS_PEAK_CONSTANT * 2 ** 6


def test_caps():
    with pytest.raises(ValueError):
        horowitz_sahni(generate_instance(50, seed=1))


def test_four_sum():
    assert four_sum(KSumInstance(([0], [0], [0], [0]), 0)) == (0, 0, 0, 0)
    rng = np.random.default_rng(0)
    arrays = [rng.integers(-1000, 1000, 64).tolist() for _ in range(4)]
    arrays[3][7] = 5 - arrays[0][1] - arrays[1][2] - arrays[2][3]
    inst = KSumInstance(arrays, 5)
    assert verify_ksum(inst, four_sum(inst))
    pos = KSumInstance(([1, 2], [3], [4], [5, 6]), -1)
    assert four_sum(pos) is None
    with pytest.raises(ValueError):
        four_sum(KSumInstance(([1], [2]), 3))


def _ring_oracle(fams, r, p, s, q):
    return {t for t in brute_4tuples(fams)
            if sum(f[i] for f, i in zip(fams, t)) % p == r and sum(f[i] for f, i in zip(fams, t)) % q == s}


def test_rings_singletons():
    assert shamir_for_rings([[0]] * 4, 0, 2, 0, 3, m=5) == [(0, 0, 0, 0)]


def test_rings_random_vs_brute():
    rnd = random.Random(7)
    for _ in range(40):
        fams = [[rnd.randint(-200, 200) for _ in range(rnd.randint(1, 8))] for _ in range(4)]
        r, s = rnd.randrange(7), rnd.randrange(11)
        want = _ring_oracle(fams, r, 7, s, 11)
        got = shamir_for_rings(fams, r, 7, s, 11)
        assert len(got) == len(set(got)) and set(got) == want
        few = shamir_for_rings(fams, r, 7, s, 11, m=3)
        assert len(few) == min(3, len(want)) and set(few) <= want


def test_rings_non_coprime():
    with pytest.raises(ValueError):
        shamir_for_rings([[0]] * 4, 0, 6, 0, 4)


def test_rings_wide_weights():
    big = 1 << 80
    fams = [[big, 1], [2], [3, big + 1], [4]]
    p, q = (1 << 61) - 1, 1000003
    tot = 1 + 2 + 3 + 4
    assert shamir_for_rings(fams, tot % p, p, tot % q, q) == [(1, 0, 0, 0)]


def _fs_oracle(fams, a, payloads):
    return {payloads[t[3]] for t in brute_4tuples(fams) if sum(f[i] for f, i in zip(fams, t)) == a}


def test_faster_shamir_vs_brute():
    rnd = random.Random(8)
    for _ in range(40):
        fams = [[rnd.randint(0, 30) for _ in range(rnd.randint(1, 8))] for _ in range(4)]
        payloads = [rnd.randint(0, 4) for _ in fams[3]]
        a = rnd.randint(20, 80)
        got = faster_shamir(fams, a, payloads)
        assert [x[0] for x in got] == [a] * len(got)
        assert sorted(x[1] for x in got) == sorted(_fs_oracle(fams, a, payloads))


def test_faster_shamir_collision_and_empty():
    fams = [[1, 2], [0], [0], [3, 2]]
    # (1,0,0,3)=4 and (2,0,0,2)=4 share payload "x"
    got = faster_shamir(fams, 4, ["x", "x"])
    assert got == [(4, "x")]
    assert faster_shamir(fams, 100, ["x", "y"]) == []
    w = faster_shamir(fams, 4, ["x", "y"], witnesses=True)
    assert {x[1] for x in w} == {"x", "y"}
    for _, pl, tup in w:
        assert sum(f[i] for f, i in zip(fams, tup)) == 4


def test_split_sizes():
    assert split_sizes(10, 4) == [3, 3, 2, 2]
    assert split_sizes(3, 4) == [1, 1, 1, 0]


def test_reduce_subsetsum_to_4sum():
    k = reduce_subsetsum_to_4sum(SubsetSumInstance([1, 2, 4, 8], 0))
    assert k.arrays == ((0, 1), (0, 2), (0, 4), (0, 8))
    inst = generate_instance(16, seed=2)
    ks = reduce_subsetsum_to_4sum(inst)
    assert all(len(a) == 16 for a in ks.arrays)
    quad = four_sum(ks)
    assert verify_certificate(inst, certificate_from_4sum(inst, quad))
    none = SubsetSumInstance(inst.items, inst.total + 1)
    assert four_sum(reduce_subsetsum_to_4sum(none)) is None


def test_reduce_uneven():
    inst = generate_instance(11, seed=5)
    ks = reduce_subsetsum_to_4sum(inst)
    assert [len(a) for a in ks.arrays] == [8, 8, 8, 4]
    assert verify_certificate(inst, certificate_from_4sum(inst, four_sum(ks)))


def test_reduce_2ksum():
    ident = KSumInstance(([1, 2], [3], [4], [5]), 0)
    assert reduce_2ksum_to_4sum(ident) == ident
    rng = np.random.default_rng(3)
    arrays = [rng.integers(-100, 100, 6).tolist() for _ in range(8)]
    planted = [int(x) for x in rng.integers(0, 6, 8)]
    t = sum(a[i] for a, i in zip(arrays, planted))
    inst = KSumInstance(arrays, t)
    red = reduce_2ksum_to_4sum(inst)
    assert all(len(a) == 36 for a in red.arrays)
    flat = tuple(planted[2 * b] * 6 + planted[2 * b + 1] for b in range(4))
    assert verify_ksum(red, flat)
    assert unflatten_2ksum(inst, flat) == tuple(planted)
    quad = four_sum(red)
    assert verify_ksum(inst, unflatten_2ksum(inst, quad))
    with pytest.raises(ValueError):
        reduce_2ksum_to_4sum(KSumInstance(([], [1], [2], [3]), 0))
    with pytest.raises(ValueError):
        reduce_2ksum_to_4sum(KSumInstance(([1], [1], [2], [3], [4], [5]), 0))
