import numpy as np
import pytest
from hypothesis import given, strategies as st

from coopnc.coding import (Subspace, check_mode, insert_if_innovative, random_combination,
                           unit_vector, xor_combination)
from coopnc.errors import ConfigurationError, InstanceShapeError, InvalidPlanError
from coopnc.gf import GF256, PrimeField

from test_gf import clmul_reduce


def _gf_inv(a):
    return next(b for b in range(1, 256) if clmul_reduce(a, b) == 1)


def oracle_rank_gf256(rows):
    """Plain Gaussian elimination with the carry-less multiply oracle."""
    rows = [list(map(int, r)) for r in rows]
    rank, m = 0, len(rows[0]) if rows else 0
    for col in range(m):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = _gf_inv(rows[rank][col])
        rows[rank] = [clmul_reduce(x, inv) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a ^ clmul_reduce(f, b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def oracle_rank_prime(rows, p=PrimeField.order):
    rows = [[int(x) % p for x in r] for r in rows]
    rank, m = 0, len(rows[0]) if rows else 0
    for col in range(m):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_insert_examples():
    s = Subspace(4, GF256)
    s2, inn = insert_if_innovative(s, unit_vector(0, 4))
    assert inn and s2.rank == 1 and s.rank == 0
    s3, inn = insert_if_innovative(s2, unit_vector(0, 4))
    assert not inn and s3 is s2
    s4, _ = insert_if_innovative(s2, unit_vector(1, 4))
    v = GF256.mul(np.array([1, 1, 0, 0]), 0x02)
    s5, inn = insert_if_innovative(s4, v)
    assert not inn and s5.rank == 2
    assert oracle_rank_gf256([unit_vector(0, 4), unit_vector(1, 4), v]) == 2


def test_shape_mismatch():
    with pytest.raises(InstanceShapeError):
        insert_if_innovative(Subspace(3), np.ones(4, dtype=np.int64))
    with pytest.raises(InstanceShapeError):
        Subspace(3).contains(np.ones(5, dtype=np.int64))


@pytest.mark.parametrize("field,oracle", [(GF256, oracle_rank_gf256),
                                          (PrimeField, oracle_rank_prime)])
def test_innovation_agrees_with_elimination_oracle(field, oracle):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        m = int(rng.integers(1, 9))
        k = int(rng.integers(0, m + 1))
        # sparse rows make dependence common enough to exercise both outcomes
        small = 4 if field is GF256 else 3
        basis = rng.integers(0, small, (k, m)) * (rng.random((k, m)) < 0.5)
        v = rng.integers(0, small, m) * (rng.random(m) < 0.6)
        if rng.random() < 0.3 and k:
            v = field.matmul(rng.integers(0, small, (1, k)), basis)[0]
        s = Subspace(m, field)
        for row in basis:
            before = s.rank
            assert s.insert(row) == (s.rank == before + 1)
        assert s.rank == oracle(basis) if k else s.rank == 0
        _, inn = insert_if_innovative(s, v)
        expect = oracle(list(basis) + [v]) > (oracle(basis) if k else 0)
        assert inn == expect


@given(st.lists(st.lists(st.integers(0, 255), min_size=5, max_size=5), max_size=8))
def test_rank_grows_by_at_most_one(rows):
    s = Subspace(5, GF256)
    for r in rows:
        before = s.rank
        inn = s.insert(np.array(r))
        assert s.rank - before == int(inn)
        assert s.rank <= 5
    assert s.rank == (oracle_rank_gf256(rows) if rows else 0)


def test_xor_combination():
    assert np.array_equal(xor_combination([2], 5), unit_vector(2, 5))
    assert list(xor_combination([1, 3], 5)) == [0, 1, 0, 1, 0]
    assert list(xor_combination([3, 4, 5], 6)) == [0, 0, 0, 1, 1, 1]
    with pytest.raises(InvalidPlanError):
        xor_combination([], 4)


def test_random_combination(rng):
    assert np.array_equal(random_combination([3], rng, "idealized", 6), unit_vector(3, 6))
    v = random_combination([0, 1], np.random.default_rng(42), "concrete", 6)
    assert v.any() and not v[2:].any()
    with pytest.raises(InvalidPlanError):
        random_combination([], rng, "idealized", 4)
    with pytest.raises(ConfigurationError):
        check_mode("huge")


def test_idealized_combination_innovative_below_full_rank(rng):
    m = 7
    for k in range(m):
        s = Subspace.from_unit_vectors(rng.choice(m, k, replace=False), m)
        # also mix in coded rows
        for _ in range(2):
            if s.rank < m - 1:
                s.insert(random_combination(range(m), rng, "idealized", m))
        if s.rank < m:
            assert s.insert(random_combination(range(m), rng, "idealized", m))


def test_idealized_matches_span_rule_and_concrete_mode():
    """Idealized innovation <=> span(e_S) not inside V; GF(2^8) agrees up to rare misses."""
    rng = np.random.default_rng(3)
    disagreements = 0
    for _ in range(500):
        m = int(rng.integers(2, 8))
        held = rng.choice(m, int(rng.integers(0, m)), replace=False)
        S = rng.choice(m, int(rng.integers(1, m + 1)), replace=False)
        expect = not set(S) <= set(held)
        ideal = Subspace.from_unit_vectors(held, m, PrimeField)
        assert ideal.copy().insert(random_combination(S, rng, "idealized", m)) == expect
        conc = Subspace.from_unit_vectors(held, m, GF256)
        got = conc.insert(random_combination(S, rng, "concrete", m))
        if got != expect:
            assert expect and not got  # only a lucky zero projection can disagree
            disagreements += 1
    # expected rate <= 1/256 per draw; allow a generous retry budget
    assert disagreements <= 10


def test_decoded_indices():
    s = Subspace.from_unit_vectors([0, 2], 4)
    assert s.decoded_indices() == {0, 2}
    s.insert(np.array([0, 1, 0, 1]))
    assert s.decoded_indices() == {0, 2}
    s.insert(np.array([0, 0, 0, 1]))
    assert s.decoded_indices() == {0, 1, 2, 3}


def test_random_vector_stays_in_span(rng):
    s = Subspace.from_unit_vectors([1, 3], 5)
    for _ in range(20):
        assert s.contains(s.random_vector(rng))
    with pytest.raises(InvalidPlanError):
        Subspace(3).random_vector(rng)
