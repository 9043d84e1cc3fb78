"""Exact finite-state analysis of the censored chain on an explicit set A.

The kernel moves between hypercube neighbours of A with probability 1/(2n)
(coordinate chosen w.p. 1/n, proposed bit differs w.p. 1/2) and holds the
remaining mass, so P is symmetric and P(x, x) >= 1/2.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import EIGEN_MAX_STATES, MIXING_TIME_CAP
from logs import logger
from src.core.errors import CapExceededError, ContractViolationError
from src.core.sets import SetRep, require_explicit

# d(t) is compared with eps up to float round-off; the rational path is exact.
MIXING_TOL = 1e-12


@dataclass(frozen=True)
class Kernel:
    n: int
    states: np.ndarray
    P: np.ndarray = field(repr=False)
    index: Dict[int, int] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.states)

    def degrees(self) -> np.ndarray:
        """Number of hypercube neighbours inside A for each state."""
        return np.rint((1.0 - np.diag(self.P)) * 2 * self.n).astype(np.int64)

    def exact_matrix(self) -> List[List[Fraction]]:
        size, unit = self.size, Fraction(1, 2 * self.n) if self.n else Fraction(0)
        rows = [[Fraction(0)] * size for _ in range(size)]
        deg = self.degrees()
        for a in range(size):
            x = int(self.states[a])
            for i in range(self.n):
                b = self.index.get(x ^ (1 << i))
                if b is not None:
                    rows[a][b] = unit
            rows[a][a] = 1 - deg[a] * unit
        return rows


def build_kernel(A: SetRep) -> Kernel:
    A = require_explicit(A, "build_kernel")
    states = A.words()
    size = len(states)
    if size == 0:
        raise ContractViolationError("the kernel of an empty set is undefined")
    if size > EIGEN_MAX_STATES:
        raise CapExceededError(f"dense kernels are capped at |A| <= {EIGEN_MAX_STATES} (got {size})")

    n = A.n
    P = np.zeros((size, size))
    rows = np.arange(size)
    for i in range(n):
        nbr = states ^ (1 << i)
        inside = A.member[nbr]
        P[rows[inside], np.searchsorted(states, nbr[inside])] = 1.0 / (2 * n)
    P[rows, rows] = 1.0 - P.sum(axis=1)
    index = {int(w): k for k, w in enumerate(states)}
    logger.debug(f"kernel on {size} states of {A.name}")
    return Kernel(n=n, states=states, P=P, index=index)


def _tv_rows(M: np.ndarray) -> np.ndarray:
    return 0.5 * np.abs(M - 1.0 / M.shape[1]).sum(axis=1)


def tv_curve(K: Kernel, x0: int, t_max: int) -> np.ndarray:
    """d(t) for t = 1..t_max from the state with index x0."""
    if not 0 <= x0 < K.size:
        raise ContractViolationError(f"start index {x0} outside 0..{K.size - 1}")
    v = np.zeros(K.size)
    v[x0] = 1.0
    out = np.empty(t_max)
    for t in range(t_max):
        v = v @ K.P
        out[t] = 0.5 * np.abs(v - 1.0 / K.size).sum()
    return out


def mixing_time(K: Kernel, eps: float = 0.25, cap: Optional[int] = None) -> Optional[int]:
    """First t with max over starts of d(t) <= eps; None if the cap is reached."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    cap = MIXING_TIME_CAP if cap is None else cap
    M = np.eye(K.size)
    for t in range(cap + 1):
        if _tv_rows(M).max() <= eps + MIXING_TOL:
            return t
        M = M @ K.P
    logger.warning(f"mixing time exceeds cap {cap} on {K.size} states")
    return None


def mixing_time_rational(K: Kernel, eps: Fraction = Fraction(1, 4), cap: int = 10_000) -> Optional[int]:
    """Same as ``mixing_time`` in exact rational arithmetic (small kernels only)."""
    P = K.exact_matrix()
    size = K.size
    uniform = Fraction(1, size)
    M = [[Fraction(int(a == b)) for b in range(size)] for a in range(size)]
    for t in range(cap + 1):
        worst = max(sum(abs(entry - uniform) for entry in row) / 2 for row in M)
        if worst <= eps:
            return t
        M = [[sum(row[k] * P[k][b] for k in range(size) if row[k]) for b in range(size)] for row in M]
    return None


def spectral_gap(K: Kernel) -> float:
    """1 − λ2 of the symmetric kernel; 1 for a single state."""
    if K.size > EIGEN_MAX_STATES:
        raise CapExceededError(f"eigensolves are capped at |A| <= {EIGEN_MAX_STATES}")
    if K.size == 1:
        return 1.0
    eigenvalues = np.linalg.eigvalsh(K.P)
    return float(1.0 - eigenvalues[-2])


def hitting_time(K: Kernel, start: int, target: int, prob: float = 0.25, cap: Optional[int] = None) -> Optional[int]:
    """First t with P(chain from ``start`` has visited ``target`` by t) >= prob.

    ``start`` and ``target`` are words of A.
    """
    cap = MIXING_TIME_CAP if cap is None else cap
    a, b = K.index[start], K.index[target]
    Q = K.P.copy()
    Q[b] = 0.0
    Q[b, b] = 1.0
    v = np.zeros(K.size)
    v[a] = 1.0
    for t in range(cap + 1):
        if v[b] >= prob - MIXING_TOL:
            return t
        v = v @ Q
    return None


def tv_curve_rows(K: Kernel, x0: int, t_max: int) -> List[Tuple[int, float]]:
    return [(t + 1, float(d)) for t, d in enumerate(tv_curve(K, x0, t_max))]
