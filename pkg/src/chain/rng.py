"""Pinned random streams.

Every stream is numpy's Philox counter-based generator keyed by
``seed + replica``, so a (seed, replica) pair names the same sequence on every
platform. Proposals are drawn in (coordinate, bit) order per step.
"""
from typing import List, Tuple

import numpy as np

from config import DRAW_BLOCK


def make_rng(seed: int, replica: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) + int(replica)))


class ProposalStream:
    """Buffered (coordinate, bit) proposals for single-site resampling."""

    def __init__(self, n: int, seed: int, replica: int = 0, block: int = DRAW_BLOCK):
        if n < 1:
            raise ValueError("proposals need at least one coordinate")
        self.n = n
        self.seed = seed
        self.replica = replica
        self.block = block
        self._rng = make_rng(seed, replica)
        self._buffer: List[List[int]] = []
        self._pos = 0

    def _refill(self):
        # Row r is step r's (i, b); numpy fills row-major, so i is drawn before b.
        self._buffer = self._rng.integers(0, (self.n, 2), size=(self.block, 2)).tolist()
        self._pos = 0

    def draw(self) -> Tuple[int, int]:
        if self._pos >= len(self._buffer):
            self._refill()
        i, b = self._buffer[self._pos]
        self._pos += 1
        return i, b
