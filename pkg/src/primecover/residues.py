"""Dense bit-indexed subsets of the nonzero residues modulo a prime q.

A ResidueSet is an immutable value: the modulus plus one Python integer used
as a bit mask (bit r set <=> residue r in the set).  Set algebra rides on
int bit operations; cardinality is a popcount.  Bit 0 is never set -- all
the arithmetic in this package is multiplicative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the positions of the set bits of `bits`, ascending."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class ResidueSet:
    """Subset of (Z/qZ)^x for prime q, as a bit mask over residues."""

    q: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.q < 3:
            raise ValueError("modulus must be at least 3")
        if self.bits & 1:
            raise ValueError("residue 0 is not invertible and cannot be a member")
        if self.bits < 0 or self.bits >> self.q:
            raise ValueError("bit mask has bits outside [1, q-1]")

    @classmethod
    def from_elements(cls, q: int, elements: Iterable[int]) -> ResidueSet:
        bits = 0
        for a in elements:
            r = int(a) % q
            if r == 0:
                raise ValueError(f"{a} reduces to 0 mod {q}")
            bits |= 1 << r
        return cls(q, bits)

    @classmethod
    def empty(cls, q: int) -> ResidueSet:
        return cls(q, 0)

    @classmethod
    def full_units(cls, q: int) -> ResidueSet:
        return cls(q, ((1 << q) - 2))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, a: int) -> bool:
        r = a % self.q
        return bool((self.bits >> r) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def elements(self) -> list[int]:
        return list(iter_bits(self.bits))

    def _check_same_q(self, other: ResidueSet) -> None:
        if self.q != other.q:
            raise ValueError(f"mixed moduli {self.q} and {other.q}")

    def __or__(self, other: ResidueSet) -> ResidueSet:
        self._check_same_q(other)
        return ResidueSet(self.q, self.bits | other.bits)

    def __and__(self, other: ResidueSet) -> ResidueSet:
        self._check_same_q(other)
        return ResidueSet(self.q, self.bits & other.bits)

    def __sub__(self, other: ResidueSet) -> ResidueSet:
        self._check_same_q(other)
        return ResidueSet(self.q, self.bits & ~other.bits)

    def is_subset(self, other: ResidueSet) -> bool:
        self._check_same_q(other)
        return self.bits & ~other.bits == 0

    @property
    def covers_units(self) -> bool:
        """True when the set is all of (Z/qZ)^x."""
        return self.bits == (1 << self.q) - 2

    def complement_units(self) -> ResidueSet:
        return ResidueSet(self.q, ((1 << self.q) - 2) & ~self.bits)

    def __repr__(self) -> str:
        n = len(self)
        if n <= 16:
            return f"ResidueSet(q={self.q}, {{{', '.join(map(str, self))}}})"
        return f"ResidueSet(q={self.q}, |S|={n})"
