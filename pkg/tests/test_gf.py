import numpy as np
import pytest

from coopnc.gf import EXP, GF256, LOG, PrimeField, field_inv, field_mul

ALL = np.arange(256, dtype=np.int64)


def clmul_reduce(a, b, poly=0x11B):
    """Carry-less multiply then reduce; shares nothing with the log tables."""
    r = 0
    for i in range(8):
        if b >> i & 1:
            r ^= a << i
    for bit in range(14, 7, -1):
        if r >> bit & 1:
            r ^= poly << (bit - 8)
    return r


def full_table():
    return GF256.mul(ALL[:, None], ALL[None, :])


def test_known_products():
    assert field_mul(0x00, 0x9F) == 0x00
    assert field_mul(0x01, 0x9F) == 0x9F
    assert field_mul(0x57, 0x83) == 0xC1
    assert clmul_reduce(0x57, 0x83) == 0xC1


def test_table_matches_clmul_oracle():
    t = full_table()
    oracle = np.array([[clmul_reduce(a, b) for b in range(256)] for a in range(256)])
    assert np.array_equal(t, oracle)


def test_tables_are_a_bijection():
    assert sorted(EXP[:255]) == list(range(1, 256))
    for x in range(1, 256):
        assert EXP[LOG[x]] == x


def test_field_axioms_exhaustive():
    t = full_table()
    assert np.array_equal(t, t.T)
    assert np.array_equal(t[1], ALL)
    assert not t[0].any()
    # associativity over all pairs for a spread of third operands
    for c in (2, 3, 0x53, 0xCA, 0xFF):
        left = GF256.mul(t, c)
        right = GF256.mul(ALL[:, None], t[:, c][None, :])
        assert np.array_equal(left, right)
    # distributivity a*(b^c) = a*b ^ a*c
    for c in (1, 7, 0x80, 0xFE):
        bc = np.bitwise_xor(ALL, c)
        assert np.array_equal(GF256.mul(ALL[:, None], bc[None, :]),
                              np.bitwise_xor(t, GF256.mul(ALL, c)[:, None]))


def test_inverses():
    for a in range(1, 256):
        assert field_mul(a, field_inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        field_inv(0)


def test_addition_is_xor():
    a = ALL[:, None]
    assert np.array_equal(GF256.add(a, ALL[None, :]), a ^ ALL[None, :])
    assert not GF256.sub(ALL, ALL).any()


def test_gf256_matmul_against_loop(rng):
    A = rng.integers(0, 256, (4, 6))
    B = rng.integers(0, 256, (6, 5))
    out = GF256.matmul(A, B)
    for i in range(4):
        for j in range(5):
            acc = 0
            for k in range(6):
                acc ^= clmul_reduce(int(A[i, k]), int(B[k, j]))
            assert out[i, j] == acc


@pytest.mark.parametrize("shape", [(3, 4, 5), (40, 60, 50), (1, 200, 300)])
def test_prime_matmul_exact(rng, shape):
    r, k, c = shape
    p = PrimeField.order
    A = rng.integers(0, p, (r, k))
    B = rng.integers(0, p, (k, c))
    out = PrimeField.matmul(A, B)
    Ao, Bo = A.astype(object), B.astype(object)
    ref = np.array([[sum(Ao[i, t] * Bo[t, j] for t in range(k)) % p for j in range(c)]
                    for i in range(r)])
    assert np.array_equal(out.astype(object), ref)


def test_prime_inverse(rng):
    for a in rng.integers(1, PrimeField.order, 50):
        assert PrimeField.mul(a, PrimeField.inv(a)) == 1
