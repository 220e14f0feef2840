import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import exhaustive_has_solution
from sslab.core import (
    KSumInstance,
    OracleRefused,
    SolutionCertificate,
    SubsetSumInstance,
    dp_oracle,
    dumps_instance,
    generate_instance,
    loads_instance,
    read_instance,
    verify_certificate,
    verify_ksum,
    write_instance,
)


def test_planted_size_two():
    inst = generate_instance(4, planted=True, solution_size=2, seed=7)
    assert len(inst.planted) == 2
    assert verify_certificate(inst, inst.planted)


def test_planted_empty():
    inst = generate_instance(1, planted=True, solution_size=0, seed=3)
    assert inst.target == 0 and inst.planted == ()
    assert verify_certificate(inst, SolutionCertificate([]))


def test_planted_n20_found_by_oracle():
    inst = generate_instance(20, weight_bits=40, planted=True, seed=1)
    cert = dp_oracle(inst)
    assert cert is not None and verify_certificate(inst, cert)


def test_generation_is_deterministic():
    assert generate_instance(12, seed=5) == generate_instance(12, seed=5)
    assert generate_instance(12, seed=5) != generate_instance(12, seed=6)


def test_unplanted_target_in_range():
    for seed in range(50):
        inst = generate_instance(6, weight_bits=8, planted=False, seed=seed, signed=True)
        lo = sum(w for w in inst.items if w < 0)
        hi = sum(w for w in inst.items if w > 0)
        assert lo <= inst.target <= hi


@pytest.mark.parametrize("kw", [dict(n=0), dict(n=3, weight_bits=0), dict(n=3, solution_size=4),
                                dict(n=10, weight_bits=124)])
def test_generation_errors(kw):
    with pytest.raises(ValueError):
        generate_instance(**kw)


def test_width_guard():
    with pytest.raises(ValueError):
        SubsetSumInstance([1 << 127], 0)


@pytest.mark.parametrize("t,expected", [(5, (1, 2)), (0, ()), (7, None)])
def test_dp_oracle_small(t, expected):
    cert = dp_oracle(SubsetSumInstance([1, 2, 3], t))
    if expected is None:
        assert cert is None
    else:
        assert cert.indices == expected


def test_dp_oracle_duplicates_and_negatives():
    inst = SubsetSumInstance([-4, 4, 4, 9], 8)
    cert = dp_oracle(inst)
    assert verify_certificate(inst, cert)


def test_dp_oracle_refuses_large():
    inst = generate_instance(40, weight_bits=30, seed=1)
    with pytest.raises(OracleRefused):
        dp_oracle(inst)


def test_dp_oracle_small_weights_large_n():
    inst = generate_instance(60, weight_bits=4, seed=2)
    cert = dp_oracle(inst)
    assert verify_certificate(inst, cert)


def test_dp_oracle_wide_weights():
    inst = SubsetSumInstance([1 << 100, 3, 1 << 101], (1 << 101) + 3)
    assert dp_oracle(inst).indices == (1, 2)


@pytest.mark.parametrize("cert,ok", [((1, 2), True), ((0, 0), False), ((5,), False), ((-1, 2), False),
                                     (("x",), False), ((0, 1), False)])
def test_verify_certificate(cert, ok):
    assert verify_certificate(SubsetSumInstance([1, 2, 3], 5), cert) is ok


def test_empty_certificate_zero_target():
    assert verify_certificate(SubsetSumInstance([4, 5], 0), ())


def test_oracle_matches_exhaustive():
    rnd = random.Random(0)
    for seed in range(300):
        n = rnd.randint(0, 14)
        items = [rnd.randint(-20, 20) for _ in range(n)]
        t = rnd.randint(-40, 40)
        inst = SubsetSumInstance(items, t)
        cert = dp_oracle(inst)
        assert (cert is not None) == exhaustive_has_solution(items, t)
        assert cert is None or verify_certificate(inst, cert)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-(1 << 40), 1 << 40), max_size=22), st.data())
def test_oracle_property(items, data):
    t = data.draw(st.one_of(st.integers(-(1 << 42), 1 << 42),
                            st.sampled_from([sum(items[: len(items) // 2]), 0])))
    inst = SubsetSumInstance(items, t)
    cert = dp_oracle(inst)
    assert (cert is not None) == exhaustive_has_solution(items, t)


def test_complement():
    inst = SubsetSumInstance([1, 2, 3, 4], 3)
    assert inst.complement().target == 7


def test_ksum_instance():
    k = KSumInstance(([1, 2], [3], [4, 5, 6]), 9)
    assert k.k == 3 and k.N == 3
    assert verify_ksum(k, (1, 0, 1)) is False
    assert verify_ksum(k, (0, 0, 2)) is False
    assert verify_ksum(k, (1, 0, 0))
    assert verify_ksum(k, (0, 0)) is False
    with pytest.raises(ValueError):
        KSumInstance(([1],))


@pytest.mark.parametrize("fmt", ["txt", "json"])
def test_roundtrip(tmp_path, fmt):
    inst = generate_instance(9, seed=3, signed=True)
    path = tmp_path / f"i.{fmt}"
    write_instance(inst, path)
    back = read_instance(path)
    assert back == inst
    if fmt == "json":
        assert back.planted == inst.planted
        assert json.loads(path.read_text())["planted_indices"] == list(inst.planted)


def test_text_format_layout():
    assert dumps_instance(SubsetSumInstance([1, 2, 3], 5)) == "3 5\n1 2 3\n"
    assert loads_instance("3 5\n1 2\n3\n").items == (1, 2, 3)


@pytest.mark.parametrize("text", ["", "3\n1 2 3", "2 1\n1 2 3", "x y\n"])
def test_bad_text(text):
    with pytest.raises(ValueError):
        loads_instance(text)
