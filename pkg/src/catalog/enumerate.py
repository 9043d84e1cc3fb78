"""Exhaustive enumeration of monotone subsets for small n."""
from functools import lru_cache
from typing import List

import numpy as np

from config import BRUTEFORCE_MAX_DIM
from src.core.errors import CapExceededError
from src.core.sets import ExplicitSet
from src.core.states import cover_pairs


def subset_masks(n: int) -> np.ndarray:
    """Every subset of {0,1}^n as a bitmask over words (bit x = word x)."""
    if n > BRUTEFORCE_MAX_DIM:
        raise CapExceededError(f"subset enumeration is capped at n <= {BRUTEFORCE_MAX_DIM} (got n={n})")
    return np.arange(1 << (1 << n), dtype=np.uint64)


@lru_cache(maxsize=None)
def _monotone_masks(n: int) -> np.ndarray:
    masks = subset_masks(n)
    ok = np.ones(masks.shape, dtype=bool)
    one = np.uint64(1)
    for x, y, _ in cover_pairs(n):
        ok &= ~(((masks >> np.uint64(x)) & one).astype(bool) & ~((masks >> np.uint64(y)) & one).astype(bool))
    out = masks[ok]
    out.setflags(write=False)
    return out


def monotone_masks(n: int) -> np.ndarray:
    """Bitmasks of all monotone subsets (counts 3, 6, 20, 168 for n = 1..4)."""
    return _monotone_masks(n)


def enumerate_monotone(n: int) -> List[ExplicitSet]:
    return [ExplicitSet.from_mask(n, int(mask), f"monotone#{int(mask):x}") for mask in monotone_masks(n)]
