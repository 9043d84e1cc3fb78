"""Hypercube vertices and the coordinatewise partial order.

A state of {0,1}^n is stored as an unsigned word whose bit i is coordinate
x_i. Hot loops work on bare ``int`` words; ``BitState`` pairs a word with its
dimension at API boundaries and in serialisation, where states are written as
little-endian 0/1 strings (character i is x_i).
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from src.core.errors import DimensionMismatchError


@dataclass(frozen=True, slots=True)
class BitState:
    bits: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"dimension must be nonnegative, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"word {self.bits} does not fit in {self.n} coordinates")

    @classmethod
    def from_string(cls, text: str) -> "BitState":
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise ValueError(f"state must be a 0/1 string, got {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(bits, len(text))

    def to_string(self) -> str:
        return word_to_string(self.bits, self.n)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __str__(self) -> str:
        return self.to_string()


def word_to_string(word: int, n: int) -> str:
    return "".join("1" if (word >> i) & 1 else "0" for i in range(n))


def _check_same_dim(x: BitState, y: BitState):
    if x.n != y.n:
        raise DimensionMismatchError(f"states live in dimensions {x.n} and {y.n}")


def leq(x: BitState, y: BitState) -> bool:
    """x <= y coordinatewise."""
    _check_same_dim(x, y)
    return x.bits & ~y.bits == 0


def up_neighbors(x: BitState) -> List[BitState]:
    return [BitState(x.bits | (1 << i), x.n) for i in range(x.n) if not (x.bits >> i) & 1]


def cover_pairs(n: int):
    """Yield (x, y, i) for every covering pair x < y = x + e_i of {0,1}^n."""
    for x in range(1 << n):
        for i in range(n):
            bit = 1 << i
            if not x & bit:
                yield x, x | bit, i


def popcounts(n: int) -> np.ndarray:
    """|x| for every word of {0,1}^n, indexed by the word."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int64)


def random_state(n: int, rng: np.random.Generator) -> int:
    """Uniform word of {0,1}^n for any n; one bit draw per coordinate."""
    if n == 0:
        return 0
    bits = rng.integers(0, 2, size=n, dtype=np.uint8)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
