"""Greedy IDNC vector construction and the M_c / M_l / M_d classification."""

from dataclasses import dataclass

import numpy as np

from .coding import xor_combination
from .errors import InvalidPlanError

MC, ML, MD = "m_c", "m_l", "m_d"


@dataclass(frozen=True)
class GroupVector:
    """Per-device entries: ``entries[n]`` is the packet device n decodes, or None."""

    entries: tuple
    order: int = 0  # creation index, used for "first element" ordering

    @property
    def constituents(self) -> frozenset:
        return frozenset(e for e in self.entries if e is not None)

    @property
    def targets(self) -> frozenset:
        return frozenset(n for n, e in enumerate(self.entries) if e is not None)

    @property
    def holders(self) -> frozenset:
        """Devices able to transmit the whole vector (their entry is NULL)."""
        return frozenset(n for n, e in enumerate(self.entries) if e is None)

    @property
    def kind(self) -> str:
        first = self.entries[0]
        if first is not None and all(e == first for e in self.entries):
            return MC
        if any(e is None for e in self.entries):
            return MD
        return ML

    def vector(self, column: dict, m: int) -> np.ndarray:
        return xor_combination([column[p] for p in self.constituents], m)

    def label(self) -> str:
        return "+".join(f"p{p}" for p in sorted(self.constituents))

    def __repr__(self):
        body = ",".join("NULL" if e is None else f"p{e}" for e in self.entries)
        return f"GroupVector([{body}])"


@dataclass
class Groups:
    m_c: list
    m_l: list
    m_d: list

    def all(self):
        return sorted(self.m_c + self.m_l + self.m_d, key=lambda v: v.order)

    def __len__(self):
        return len(self.m_c) + len(self.m_l) + len(self.m_d)


def group_wants(wants, n=None) -> Groups:
    """Build IDNC vectors packet by packet and classify them.

    Packets are visited in ascending order; each is merged into the earliest
    vector whose entries are NULL for every device wanting it, otherwise it
    starts a new vector.
    """
    wants = [frozenset(w) for w in wants]
    n = len(wants) if n is None else n
    packets = sorted(frozenset().union(*wants)) if wants else []
    occupied = []  # bitmask of non-NULL entries per vector
    entries = []
    for p in packets:
        mask = 0
        for k in range(n):
            if p in wants[k]:
                mask |= 1 << k
        for i, occ in enumerate(occupied):
            if occ & mask == 0:
                occupied[i] |= mask
                row = entries[i]
                for k in range(n):
                    if mask >> k & 1:
                        row[k] = p
                break
        else:
            occupied.append(mask)
            entries.append([p if mask >> k & 1 else None for k in range(n)])
    groups = Groups([], [], [])
    for i, row in enumerate(entries):
        v = GroupVector(tuple(row), i)
        getattr(groups, v.kind).append(v)
    return groups


def split_ml(v: GroupVector, x: int):
    """Split an M_l vector into the part device ``x`` can send and the rest.

    The partial holds every entry different from ``v[x]`` (x has all of those
    packets); the residual holds the entries equal to ``v[x]``.
    """
    if v.kind != ML:
        raise InvalidPlanError(f"{v!r} is not an M_l vector")
    own = v.entries[x]
    partial = tuple(e if e != own else None for e in v.entries)
    residual = tuple(e if e == own else None for e in v.entries)
    return GroupVector(partial, v.order), GroupVector(residual, v.order)


def is_instantly_decodable(v: GroupVector, wants) -> bool:
    """Every device with an entry wants exactly that one constituent; the rest want none."""
    c = v.constituents
    for n, e in enumerate(v.entries):
        hit = c & frozenset(wants[n])
        if e is None:
            if hit:
                return False
        elif hit != {e}:
            return False
    return True
