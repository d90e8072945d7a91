"""Finite-field arithmetic used by the coding core.

Two fields share one vectorised interface (all arrays are ``int64``):

* :class:`GF256` -- GF(2^8) with reduction polynomial x^8+x^4+x^3+x+1 (0x11B),
  implemented with log/antilog tables over the generator 0x03.
* :class:`PrimeField` -- GF(p) with p = 2^31 - 1. This is the stand-in for an
  arbitrarily large field: a random combination falls into a given proper
  subspace with probability at most 1/p.
"""

import numpy as np

POLY = 0x11B
GENERATOR = 0x03


def _build_tables():
    exp = np.zeros(512, dtype=np.int64)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        # multiply by 0x03 = x*2 ^ x
        x2 = x << 1
        if x2 & 0x100:
            x2 ^= POLY
        x = x2 ^ x
    exp[255:510] = exp[0:255]
    return exp, log


EXP, LOG = _build_tables()


def field_mul(a: int, b: int) -> int:
    """Product of two GF(2^8) elements under 0x11B."""
    if a == 0 or b == 0:
        return 0
    return int(EXP[LOG[a] + LOG[b]])


def field_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(2^8)")
    return int(EXP[255 - LOG[a]])


class GF256:
    name = "gf256"
    order = 256

    @staticmethod
    def add(a, b):
        return np.bitwise_xor(a, b)

    sub = add

    @staticmethod
    def mul(a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = EXP[LOG[a] + LOG[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    @staticmethod
    def inv(a: int) -> int:
        return field_inv(int(a))

    @staticmethod
    def matmul(A, B):
        """(r x k) @ (k x m) over GF(2^8)."""
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        la = LOG[A]
        lb = LOG[B]
        prod = EXP[la[:, :, None] + lb[None, :, :]]
        prod[(A == 0)[:, :, None] | (B == 0)[None, :, :]] = 0
        return np.bitwise_xor.reduce(prod, axis=1)

    @staticmethod
    def random(rng, size, nonzero=False):
        low = 1 if nonzero else 0
        return rng.integers(low, 256, size=size, dtype=np.int64)


class PrimeField:
    name = "prime"
    order = (1 << 31) - 1
    _LO_BITS = 16
    _LO_MASK = (1 << 16) - 1

    @classmethod
    def add(cls, a, b):
        return (a + b) % cls.order

    @classmethod
    def sub(cls, a, b):
        return (a - b) % cls.order

    @classmethod
    def mul(cls, a, b):
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % cls.order

    @classmethod
    def inv(cls, a: int) -> int:
        a = int(a) % cls.order
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, cls.order - 2, cls.order)

    @classmethod
    def matmul(cls, A, B):
        # Split both operands into 16-bit limbs: each limb product is < 2^32, so
        # float64 (BLAS) sums stay exact for inner dimensions below 2^21.
        k = A.shape[1]
        if k == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if k >= 1 << 21:
            raise ValueError("inner dimension too large for exact float products")
        p = cls.order
        s, mask = cls._LO_BITS, cls._LO_MASK
        if A.shape[0] * k * B.shape[1] < 40000:
            # small products: two integer matmuls beat the float conversions
            hi = (A @ (B >> s)) % p
            return ((hi << s) + A @ (B & mask)) % p
        ah, al = (A >> s).astype(np.float64), (A & mask).astype(np.float64)
        bh, bl = (B >> s).astype(np.float64), (B & mask).astype(np.float64)
        hh = (ah @ bh).astype(np.int64) % p
        mid = ((ah @ bl).astype(np.int64) + (al @ bh).astype(np.int64)) % p
        ll = (al @ bl).astype(np.int64)
        # 2^32 = 2 (mod 2^31 - 1)
        return (2 * hh + (mid << s) + ll) % p

    @classmethod
    def random(cls, rng, size, nonzero=False):
        low = 1 if nonzero else 0
        return rng.integers(low, cls.order, size=size, dtype=np.int64)
