"""Hamming distance and the Hamming-distance-preserving bijections of n-bit strings.

Every such bijection is a bit reordering followed by a bit-flip mask,
``table[x] = reorder(x) ^ mask``, so there are ``2**n * n!`` of them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .core import popcount

MAX_ENUMERATION_QUBITS = 4


def hamming_distance(x: int, y: int, n: int | None = None) -> int:
    if n is not None and not (0 <= x < 1 << n and 0 <= y < 1 << n):
        raise ValueError(f"strings {x}, {y} are not {n}-bit")
    if x < 0 or y < 0:
        raise ValueError("bit strings must be non-negative integers")
    return popcount(x ^ y)


def apply_reorder(x: int, reorder) -> int:
    """Move bit ``j`` of ``x`` to position ``reorder[j]``."""
    out = 0
    for j, target in enumerate(reorder):
        if x >> j & 1:
            out |= 1 << target
    return out


@dataclass(frozen=True)
class HDFunction:
    """A Hamming-distance-preserving bijection stored as a lookup table.

    Attributes:
        n: Number of bits.
        table: ``table[x]`` is the image of string ``x``.
        mask: Bit-flip mask applied after reordering (equals ``table[0]``).
        reorder: ``reorder[j]`` is the output position of input bit ``j``.
    """

    n: int
    table: tuple[int, ...]
    mask: int
    reorder: tuple[int, ...]

    @classmethod
    def from_factors(cls, n: int, mask: int, reorder) -> "HDFunction":
        reorder = tuple(int(j) for j in reorder)
        if sorted(reorder) != list(range(n)):
            raise ValueError(f"{reorder} is not a permutation of {n} bit positions")
        if not 0 <= mask < 1 << n:
            raise ValueError(f"mask {mask} is not an {n}-bit string")
        table = tuple(apply_reorder(x, reorder) ^ mask for x in range(1 << n))
        return cls(n, table, mask, reorder)

    @classmethod
    def from_table(cls, table, n: int) -> "HDFunction":
        mask, reorder = factor_hdf(table, n)
        return cls(n, tuple(int(t) for t in table), mask, reorder)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def compose(self, other: "HDFunction") -> "HDFunction":
        """``self`` after ``other``."""
        return HDFunction.from_table([self.table[other.table[x]] for x in range(1 << self.n)], self.n)

    def inverse(self) -> "HDFunction":
        inv = [0] * len(self.table)
        for x, y in enumerate(self.table):
            inv[y] = x
        return HDFunction.from_table(inv, self.n)

    def to_dict(self) -> dict:
        return {"table": list(self.table), "mask": self.mask, "reorder": list(self.reorder)}


def _check_bijection(table, n: int) -> list[int]:
    table = [int(t) for t in table]
    if sorted(table) != list(range(1 << n)):
        raise ValueError(f"table is not a bijection on {n}-bit strings")
    return table


def is_hdf(table, n: int) -> bool:
    """True iff the bijection preserves Hamming distance on every pair."""
    table = _check_bijection(table, n)
    d = 1 << n
    return all(
        popcount(x ^ y) == popcount(table[x] ^ table[y]) for x in range(d) for y in range(x + 1, d)
    )


def factor_hdf(table, n: int) -> tuple[int, tuple[int, ...]]:
    """Split an HDF into ``(mask, reorder)`` with ``table[x] = reorder(x) ^ mask``."""
    if not is_hdf(table, n):
        raise ValueError("table is not Hamming-distance preserving")
    table = [int(t) for t in table]
    mask = table[0]
    reorder = tuple((table[1 << j] ^ mask).bit_length() - 1 for j in range(n))
    return mask, reorder


@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple[HDFunction, ...]:
    return tuple(
        HDFunction.from_factors(n, mask, reorder)
        for mask in range(1 << n)
        for reorder in itertools.permutations(range(n))
    )


def enumerate_hdf(n: int) -> list[HDFunction]:
    """All ``2**n * n!`` HDFs on n bits.

    Order is canonical: masks ascending, and for each mask the reorders in
    lexicographic order of the tuple ``reorder``.
    """
    if not 1 <= n <= MAX_ENUMERATION_QUBITS:
        raise ValueError(f"enumeration supported for 1 <= n <= {MAX_ENUMERATION_QUBITS}, got {n}")
    out = list(_enumerate(n))
    assert len(out) == (1 << n) * math.factorial(n)
    return out


def hdf_extensions(partial: dict[int, int], n: int) -> list[HDFunction]:
    """HDFs that agree with a partial map ``{x: image}``."""
    return [f for f in enumerate_hdf(n) if all(f.table[x] == y for x, y in partial.items())]
