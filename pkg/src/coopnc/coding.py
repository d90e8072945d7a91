"""Coefficient vectors and rank-tracked knowledge subspaces.

Packets are symbolic: a coded packet is just its coefficient vector over the
``M`` original packets, so only innovation and decodability are modelled.

Coding modes
------------
``idealized``
    Coefficients live in GF(2^31 - 1). A random combination drawn from a
    subspace ``S`` is innovative for ``V`` exactly when ``S`` is not inside
    ``V``, up to a failure probability of at most 2^-31 per draw.
``concrete``
    GF(2^8) under 0x11B. Unlucky draws are possible and simply cost the slot.
"""

from enum import Enum

import numpy as np

from .errors import ConfigurationError, InstanceShapeError, InvalidPlanError
from .gf import GF256, PrimeField


class CodingMode(str, Enum):
    IDEALIZED = "idealized"
    CONCRETE = "concrete"


def field_for(mode):
    mode = CodingMode(mode)
    return PrimeField if mode is CodingMode.IDEALIZED else GF256


def unit_vector(index: int, m: int) -> np.ndarray:
    v = np.zeros(m, dtype=np.int64)
    v[index] = 1
    return v


def xor_combination(indices, m: int) -> np.ndarray:
    """Coefficient 1 on every listed index: the IDNC packet p_i + p_j + ..."""
    indices = list(indices)
    if not indices:
        raise InvalidPlanError("cannot combine an empty set of packets")
    v = np.zeros(m, dtype=np.int64)
    v[indices] = 1
    return v


def random_combination(indices, rng, mode, m: int) -> np.ndarray:
    """Random linear combination of the unit vectors at ``indices``.

    Idealized vectors are normalised so their first nonzero coefficient is 1;
    a singleton therefore comes back as the plain unit vector.
    """
    indices = sorted(indices)
    if not indices:
        raise InvalidPlanError("cannot combine an empty set of packets")
    field = field_for(mode)
    v = np.zeros(m, dtype=np.int64)
    if field is PrimeField:
        coeffs = field.random(rng, len(indices), nonzero=True)
        coeffs = field.mul(coeffs, field.inv(coeffs[0]))
    else:
        coeffs = field.random(rng, len(indices))
        while not coeffs.any():
            coeffs = field.random(rng, len(indices))
    v[indices] = coeffs
    return v


class Subspace:
    """Row-reduced basis of a subspace of F^M, updated one vector at a time.

    Every basis row has a leading 1 at its pivot column and zeros in every other
    pivot column, so membership is one elimination pass.
    """

    __slots__ = ("field", "m", "rows", "pivots")

    def __init__(self, m: int, field=PrimeField):
        self.field = field
        self.m = m
        self.rows = np.zeros((0, m), dtype=np.int64)
        self.pivots = []

    @classmethod
    def from_unit_vectors(cls, indices, m, field=PrimeField):
        s = cls(m, field)
        idx = sorted(indices)
        if idx:
            s.rows = np.zeros((len(idx), m), dtype=np.int64)
            s.rows[np.arange(len(idx)), idx] = 1
            s.pivots = list(idx)
        return s

    def copy(self):
        s = Subspace.__new__(Subspace)
        s.field = self.field
        s.m = self.m
        s.rows = self.rows.copy()
        s.pivots = list(self.pivots)
        return s

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.rank

    def _check(self, v):
        if v.shape[-1] != self.m:
            raise InstanceShapeError(f"vector length {v.shape[-1]} != M={self.m}")

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Residues of a (k x M) block after eliminating against the basis."""
        self._check(vectors)
        if not self.pivots:
            return vectors.copy()
        coeffs = vectors[:, self.pivots]
        return self.field.sub(vectors, self.field.matmul(coeffs, self.rows))

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64)
        return not self.reduce(v[None, :]).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.rank > self.rank:
            return False
        if other.rank == 0:
            return True
        return not self.reduce(other.rows).any()

    def insert(self, v) -> bool:
        """Add ``v`` to the span in place; return whether it was innovative."""
        v = np.asarray(v, dtype=np.int64)
        r = self.reduce(v[None, :])[0]
        nz = np.flatnonzero(r)
        if nz.size == 0:
            return False
        f = self.field
        c = int(nz[0])
        r = f.mul(r, f.inv(r[c]))
        if self.pivots:
            # only rows with a nonzero entry in the new pivot column change
            hit = np.flatnonzero(self.rows[:, c])
            if hit.size:
                self.rows[hit] = f.sub(self.rows[hit], f.mul(self.rows[hit, c][:, None], r[None, :]))
        self.rows = np.vstack([self.rows, r[None, :]])
        self.pivots.append(c)
        return True

    def decoded_indices(self) -> set:
        """Columns m whose unit vector e_m lies in the span."""
        if not self.pivots:
            return set()
        single = np.count_nonzero(self.rows, axis=1) == 1
        return {p for p, s in zip(self.pivots, single) if s}

    def random_vector(self, rng) -> np.ndarray:
        """Uniformly random element of the span (never the zero vector)."""
        if not self.pivots:
            raise InvalidPlanError("cannot draw from the zero subspace")
        f = self.field
        while True:
            c = f.random(rng, (1, self.rank))
            v = f.matmul(c, self.rows)[0]
            if v.any():
                return v


def insert_if_innovative(s: Subspace, v) -> tuple:
    """Functional insert: returns ``(subspace, innovative)`` and leaves ``s`` alone."""
    v = np.asarray(v, dtype=np.int64)
    if v.shape != (s.m,):
        raise InstanceShapeError(f"vector shape {v.shape} does not match M={s.m}")
    t = s.copy()
    innovative = t.insert(v)
    return (t if innovative else s), innovative


def check_mode(mode):
    try:
        return CodingMode(mode)
    except ValueError:
        raise ConfigurationError(f"unknown coding mode {mode!r}") from None
