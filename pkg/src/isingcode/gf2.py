"""GF(2) linear algebra on packed bit vectors.

Vectors are stored as Python integers (arbitrary-width machine words),
so XOR, AND and popcount are single operations. Rank and membership use
in-place Gaussian elimination on the packed representation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class BitVector:
    """Immutable GF(2) vector: ``length`` coordinates packed into ``mask``.

    Bit i of ``mask`` is coordinate i. Used for stabilizer supports,
    error patterns, bond-sign assignments and loop configurations.
    """

    length: int
    mask: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError(f"negative length {self.length}")
        if self.mask < 0 or self.mask >> self.length:
            raise ValueError(f"mask 0x{self.mask:x} does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVector":
        mask = 0
        for i in indices:
            if not 0 <= i < length:
                raise IndexError(f"bit index {i} out of range for length {length}")
            mask |= 1 << i
        return cls(length, mask)

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "BitVector":
        mask = 0
        for i, b in enumerate(bits):
            if b & 1:
                mask |= 1 << i
        return cls(len(bits), mask)

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.mask ^ other.mask)

    def __and__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return BitVector(self.length, self.mask & other.mask)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return (self.mask >> i) & 1

    @property
    def weight(self) -> int:
        return self.mask.bit_count()

    def overlap(self, other: "BitVector") -> int:
        """Number of coordinates set in both vectors."""
        return (self & other).weight

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.length) if (self.mask >> i) & 1)

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.length, dtype=np.uint8)
        for i in self.indices():
            out[i] = 1
        return out

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.mask >> i) & 1

    def __str__(self) -> str:
        return "".join(str(b) for b in self)


def _check_same_length(rows: Sequence[BitVector]) -> None:
    lengths = {r.length for r in rows}
    if len(lengths) > 1:
        raise ValueError(f"ragged rows: lengths {sorted(lengths)}")


def _reduce(m: int, c: int, basis: list[tuple[int, int]]) -> tuple[int, int]:
    """Reduce (m, c) against an echelon basis sorted by leading bit, descending.

    Reduction by a basis mask b fires iff bit leading(b) is set in m, so a
    single descending pass fully reduces m.
    """
    for bm, bc in basis:
        if m ^ bm < m:
            m, c = m ^ bm, c ^ bc
    return m, c


def _insert(m: int, c: int, basis: list[tuple[int, int]]) -> None:
    lead = m.bit_length()
    pos = 0
    while pos < len(basis) and basis[pos][0].bit_length() > lead:
        pos += 1
    basis.insert(pos, (m, c))


def gf2_rank(rows: Sequence[BitVector]) -> int:
    """GF(2) rank of a set of equal-length vectors."""
    _check_same_length(rows)
    basis: list[tuple[int, int]] = []
    for row in rows:
        m, _ = _reduce(row.mask, 0, basis)
        if m:
            _insert(m, 0, basis)
    return len(basis)


def gf2_solve_membership(
    target: BitVector, span_rows: Sequence[BitVector]
) -> Optional[BitVector]:
    """Express ``target`` as an XOR of ``span_rows``, if possible.

    Returns a coefficient vector c of length ``len(span_rows)`` with
    XOR over {rows[i] : c_i = 1} equal to ``target``, or None when
    ``target`` is outside the span.
    """
    _check_same_length(list(span_rows) + [target])
    n = len(span_rows)
    # Augmented elimination: track which input rows combine into each
    # reduced basis vector.
    basis: list[tuple[int, int]] = []
    for i, row in enumerate(span_rows):
        m, c = _reduce(row.mask, 1 << i, basis)
        if m:
            _insert(m, c, basis)
    t, coeff = _reduce(target.mask, 0, basis)
    if t:
        return None
    return BitVector(n, coeff)
