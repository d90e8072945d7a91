"""Header and acknowledgement overhead as a fraction of the data carried.

Each term is a bit count; the fraction divides their sum by 2P, the payload of
the two packets sent per slot (P for stage one, which sends a single packet
and only needs the 2-bit acknowledgement).
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigurationError

VARIANTS = ("stage1", "batch-lossless", "instant-lossless", "batch-lossy", "instant-lossy")


@dataclass(frozen=True)
class OverheadParams:
    P: int
    F: int = 256
    M: int = 0
    N_t: int = 0
    N: int = 0

    def __post_init__(self):
        if self.P <= 0:
            raise ConfigurationError("P must be positive")
        if self.F < 2 or self.F & (self.F - 1):
            raise ConfigurationError(f"field size F={self.F} is not a power of two")
        if self.M < 0 or self.N_t < 0:
            raise ConfigurationError("M and N_t must be non-negative")
        if self.N and self.N_t > self.N:
            raise ConfigurationError("N_t cannot exceed N")

    @property
    def log2_f(self) -> int:
        return self.F.bit_length() - 1


@dataclass(frozen=True)
class Overhead:
    O_d: int
    O_nc: int
    O_ack: int
    fraction: Fraction


def overhead_fraction(variant: str, params: OverheadParams) -> Overhead:
    p = params
    if variant == "stage1":
        return Overhead(0, 0, 2, Fraction(2, p.P))
    if variant in ("batch-lossless", "batch-lossy"):
        o_d, o_nc = 1, 2 * p.M * p.log2_f
    elif variant in ("instant-lossless", "instant-lossy"):
        o_d, o_nc = p.M, 2 * p.M
    else:
        raise ConfigurationError(f"unknown overhead variant {variant!r}; choose from {VARIANTS}")
    o_ack = 4 * p.N_t if variant.endswith("lossy") else 0
    return Overhead(o_d, o_nc, o_ack, Fraction(o_d + o_nc + o_ack, 2 * p.P))
