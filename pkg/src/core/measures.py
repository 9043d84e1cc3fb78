"""Probability measures on {0,1}^n.

Uniform quantities are carried as exact ``Fraction``s (counts over 2^n);
weighted measures are float arrays normalised to 1 within 1e-12.
"""
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import gammaln, logsumexp

from src.core.errors import DimensionMismatchError, RepresentationError
from src.core.sets import ExplicitSet, require_explicit
from src.core.states import popcounts

Probability = Union[Fraction, float]

NORMALIZATION_TOL = 1e-12


class Measure:
    n: int

    @property
    def is_uniform(self) -> bool:
        return False

    def weights(self) -> np.ndarray:
        """Per-state probabilities indexed by word."""
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


class UniformCube(Measure):
    def __init__(self, n: int):
        self.n = n

    @property
    def is_uniform(self) -> bool:
        return True

    def weights(self) -> np.ndarray:
        return np.full(1 << self.n, 1.0 / (1 << self.n))

    def describe(self) -> dict:
        return {"kind": "uniform", "n": self.n}

    def __repr__(self) -> str:
        return f"UniformCube(n={self.n})"


class WeightTable(Measure):
    """Explicit per-state weights. Rejected downstream unless normalised."""

    def __init__(self, n: int, w, normalize: bool = False):
        w = np.asarray(w, dtype=float).copy()
        if w.shape != (1 << n,):
            raise ValueError(f"weight table for n={n} must have length {1 << n}, got {w.shape}")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        if normalize:
            w /= w.sum()
        w.setflags(write=False)
        self.n = n
        self.w = w

    @property
    def is_normalized(self) -> bool:
        return abs(float(self.w.sum()) - 1.0) <= NORMALIZATION_TOL

    def weights(self) -> np.ndarray:
        return self.w

    def describe(self) -> dict:
        return {"kind": "weight-table", "n": self.n}

    def __repr__(self) -> str:
        return f"WeightTable(n={self.n})"


def curie_weiss_levels(n: int, beta: float) -> np.ndarray:
    """Level probabilities ∝ C(n,k)·exp(β(2k−n)²/(2n)), log-sum-exp normalised."""
    k = np.arange(n + 1, dtype=float)
    log_binom = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    log_w = log_binom + beta * (2 * k - n) ** 2 / (2 * n)
    levels = np.exp(log_w - logsumexp(log_w))
    # Spin-flip symmetry holds exactly in the formula; enforce it against rounding.
    return (levels + levels[::-1]) / 2


class CurieWeiss(Measure):
    """Ising measure on the complete graph; weight depends only on |x|.

    Spins map 0 -> -1 and 1 -> +1, so magnetisation is 2|x| − n and
    μ(σ) ∝ exp(β m² / (2n)).
    """

    def __init__(self, n: int, beta: float):
        if n < 1:
            raise ValueError("Curie-Weiss needs at least one site")
        if beta < 0:
            raise ValueError("inverse temperature must be nonnegative")
        self.n = n
        self.beta = float(beta)
        self.level_prob = curie_weiss_levels(n, self.beta)
        self.level_prob.setflags(write=False)

    def weights(self) -> np.ndarray:
        k = np.arange(self.n + 1)
        log_binom = gammaln(self.n + 1) - gammaln(k + 1) - gammaln(self.n - k + 1)
        per_state = np.exp(np.log(self.level_prob) - log_binom)
        return per_state[popcounts(self.n)]

    def level_mass(self, level: int) -> float:
        return float(self.level_prob[level])

    def describe(self) -> dict:
        return {
            "kind": "curie-weiss",
            "n": self.n,
            "beta": self.beta,
            "hamiltonian": "mu(sigma) ~ exp(beta * m^2 / (2n)), m = sum sigma_i, 0 -> -1, 1 -> +1",
        }

    def __repr__(self) -> str:
        return f"CurieWeiss(n={self.n}, beta={self.beta})"


def require_normalized(m: Measure):
    if isinstance(m, WeightTable) and not m.is_normalized:
        raise RepresentationError(f"weight table sums to {float(m.w.sum())!r}, expected 1")


def check_dims(m: Measure, S: ExplicitSet):
    if m.n != S.n:
        raise DimensionMismatchError(f"measure has n={m.n} but the set has n={S.n}")


def measure_of(m: Measure, S) -> Probability:
    S = require_explicit(S, "measure_of")
    check_dims(m, S)
    require_normalized(m)
    if m.is_uniform:
        return Fraction(S.size, 1 << S.n)
    return float(m.weights()[S.member].sum())
