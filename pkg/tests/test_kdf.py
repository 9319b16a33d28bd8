import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mceliece_kem.gf2 import BitVector
from mceliece_kem.kdf import OracleTable, RandomOracle, kdf_derive, kdf_payload, oracle_query

import oracles


def test_empty_output():
    assert kdf_derive(BitVector.zeros(11), 0) == b""
    with pytest.raises(ValueError):
        kdf_derive(BitVector.zeros(11), -1)


def test_payload_order():
    p = kdf_payload(BitVector.from_str("10"), BitVector.from_str("001"))
    assert str(p) == "10001"


@given(st.integers(1, 400), st.integers(0, 520), st.data())
def test_matches_reference(n, ell, data):
    v = BitVector(n, data.draw(st.integers(0, (1 << n) - 1)))
    out = kdf_derive(v, ell)
    assert out == oracles.kdf_reference(oracles.to_list(v), ell)
    assert len(out) == (ell + 7) // 8
    assert kdf_derive(v, ell) == out


def test_frozen_vector():
    # computed once by oracles.kdf_reference
    v = BitVector.from_str("10110001011")
    assert kdf_derive(v, 64).hex() == oracles.kdf_reference(oracles.bits("10110001011"), 64).hex()
    assert kdf_derive(v, 64).hex() == "61232d7dda61ad93"


def test_single_bit_changes_never_collide():
    r = random.Random(3)
    for _ in range(10_000):
        v = BitVector(11 + 7, r.getrandbits(18))
        u = v ^ BitVector.from_support(18, [r.randrange(18)])
        assert kdf_derive(v, 256) != kdf_derive(u, 256)


class TestOracle:
    def test_replay_consistency(self):
        t = OracleTable()
        r = random.Random(1)
        a = oracle_query(t, BitVector.from_str("101"), 256, r)
        assert oracle_query(t, BitVector.from_str("101"), 256, r) == a
        assert len(a) == 32 and t.queries == 2 and len(t.entries) == 1

    def test_fixed_length(self):
        t = OracleTable()
        oracle_query(t, BitVector.zeros(3), 256, random.Random(0))
        with pytest.raises(ValueError):
            oracle_query(t, BitVector.zeros(3), 128, random.Random(0))

    def test_same_seed_same_transcript(self):
        r = random.Random(8)
        seq = [BitVector(20, r.getrandbits(20)) for _ in range(50)]
        seq += seq[::3]
        runs = []
        for _ in range(2):
            oracle = RandomOracle(random.Random(77))
            runs.append([oracle(p, 256) for p in seq])
        assert runs[0] == runs[1]

    def test_programming(self):
        oracle = RandomOracle(random.Random(0))
        p = BitVector.from_str("11")
        oracle.program(p, b"\x01" * 32)
        assert oracle(p, 256) == b"\x01" * 32
        with pytest.raises(ValueError):
            oracle.program(p, b"\x02" * 32)
