"""Exact conductance of the censored chain's graph.

Each state of A has degree n (hypercube neighbours inside A plus self-loops),
so vol(S) = n|S| and Φ(S) = |∂_E S| / (n|S|); self-loops never cross a cut.
The minimum runs over nonempty S ⊆ A with |S| <= |A|/2, i.e.
P(S) <= P(A)/2.
"""
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from config import CONDUCTANCE_MAX_STATES
from logs import logger
from src.core.errors import CapExceededError, ContractViolationError
from src.core.parallel import parallel_map
from src.core.sets import ExplicitSet, SetRep, require_explicit
from src.core.states import word_to_string
from src.reports.structured import ConductanceResult, Ratio

CHUNK = 1 << 16


def internal_edges(A: ExplicitSet) -> np.ndarray:
    """Hypercube edges inside A as (index, index) pairs into A.words()."""
    states = A.words()
    pairs = []
    for i in range(A.n):
        nbr = states ^ (1 << i)
        upward = ((states >> i) & 1 == 0) & A.member[nbr]
        lo = np.flatnonzero(upward)
        pairs.append(np.stack([lo, np.searchsorted(states, nbr[upward])], axis=1))
    return np.concatenate(pairs) if pairs else np.empty((0, 2), dtype=np.int64)


def boundary_size(A: ExplicitSet, B: ExplicitSet) -> int:
    """|∂_E B|: hypercube edges from B to A ∖ B."""
    rest = A.member & ~B.member
    total = 0
    words = np.arange(1 << A.n)
    for i in range(A.n):
        total += int((B.member & rest[words ^ (1 << i)]).sum())
    return total


def cut_ratio(A: ExplicitSet, B: ExplicitSet) -> Fraction:
    """Φ(B) = |∂_E B| / (n|B|)."""
    if B.size == 0:
        raise ContractViolationError("Φ of the empty set is undefined")
    return Fraction(boundary_size(A, B), A.n * B.size)


def _scan_range(job: Tuple[int, int, np.ndarray, int]) -> Optional[Tuple[int, int, int]]:
    """Best (boundary, size, mask) among masks in [start, stop) with 1 <= |S| <= N/2."""
    start, stop, edges, size = job
    masks = np.arange(start, stop, dtype=np.uint64)
    sizes = np.bitwise_count(masks).astype(np.int64)
    keep = (sizes >= 1) & (2 * sizes <= size)
    if not keep.any():
        return None
    masks, sizes = masks[keep], sizes[keep]
    boundary = np.zeros(masks.shape, dtype=np.int64)
    one = np.uint64(1)
    for u, v in edges:
        boundary += (((masks >> np.uint64(u)) ^ (masks >> np.uint64(v))) & one).astype(np.int64)
    # Distinct ratios with denominators <= 22 are far apart in floating point.
    best = int(np.argmin(boundary / sizes))
    return int(boundary[best]), int(sizes[best]), int(masks[best])


def conductance_exact(A: SetRep, workers: Optional[int] = None) -> ConductanceResult:
    A = require_explicit(A, "conductance_exact")
    size = A.size
    if size == 0:
        raise ContractViolationError("conductance of the empty set is undefined")
    if size > CONDUCTANCE_MAX_STATES:
        raise CapExceededError(
            f"exact conductance enumerates 2^|A| subsets and is capped at |A| <= {CONDUCTANCE_MAX_STATES} (got {size})"
        )
    lower_bound = Ratio.of(Fraction(size, 1 << A.n) / (16 * A.n))
    if size == 1:
        logger.warning(f"{A.name} is a single state; conductance is vacuous")
        return ConductanceResult(vacuous=True, lower_bound=lower_bound)

    edges = internal_edges(A)
    total = 1 << size
    jobs = [(start, min(start + CHUNK, total), edges, size) for start in range(1, total, CHUNK)]
    results = [r for r in parallel_map(_scan_range, jobs, workers) if r is not None]
    boundary, witness_size, mask = min(results, key=lambda r: (Fraction(r[0], r[1]), r[2]))

    states = A.words()
    witness: List[str] = sorted(word_to_string(int(states[k]), A.n) for k in range(size) if (mask >> k) & 1)
    return ConductanceResult(
        phi=Ratio.of(Fraction(boundary, A.n * witness_size)),
        vacuous=False,
        witness=witness,
        witness_size=witness_size,
        boundary_edges=boundary,
        lower_bound=lower_bound,
    )


def witness_set(A: ExplicitSet, result: ConductanceResult) -> Optional[ExplicitSet]:
    if result.witness is None:
        return None
    return ExplicitSet.from_strings(result.witness, n=A.n, name="conductance-witness")
