"""Critical site percolation on an L×L rhombus of the triangular lattice.

Site (r, c) is bit r·L + c of a configuration word; 1 means open. Each site
touches (r±1, c), (r, c±1), (r+1, c−1) and (r−1, c+1), the cells of a Hex
board. Open sites crossing from column 0 to column L−1 and closed sites
crossing from row 0 to row L−1 are complementary events, and the map
"transpose and flip every site" swaps them, so P[crossing] = 1/2 at p = 1/2.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage

from config import PERCOLATION_EXACT_MAX_SITES, PERCOLATION_EXPLICIT_MAX_SITES
from logs import logger
from src.chain.dynamics import ChainConfig, empirical_distribution, rejection_samples, run
from src.chain.rng import make_rng
from src.core.errors import CapExceededError, ContractViolationError, DimensionMismatchError, SpecParseError
from src.core.sets import ExplicitSet, OracleSet, SetRep
from src.core.states import BitState
from src.reports.structured import CrossingProbability, PercolationReport, Ratio, Trajectory

OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1), (1, -1), (-1, 1))

# 3x3 structuring element of OFFSETS for ndimage.label.
STRUCTURE = np.array([[0, 1, 1], [1, 1, 1], [1, 1, 0]], dtype=bool)

# Batch axis first; only the middle slab is nonzero, so configurations never join.
BATCH_STRUCTURE = np.stack([np.zeros_like(STRUCTURE), STRUCTURE, np.zeros_like(STRUCTURE)])

BATCH = 1 << 14


@dataclass(frozen=True)
class HexLattice:
    L: int

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"lattice side must be at least 1, got {self.L}")

    @property
    def sites(self) -> int:
        return self.L * self.L

    def neighbours(self, r: int, c: int) -> List[Tuple[int, int]]:
        return [
            (r + dr, c + dc) for dr, dc in OFFSETS if 0 <= r + dr < self.L and 0 <= c + dc < self.L
        ]

    def geometry(self) -> str:
        return (
            f"triangular-site rhombus {self.L}x{self.L}; neighbours (r±1,c),(r,c±1),(r+1,c-1),(r-1,c+1); "
            f"open left-right crossing between columns 0 and {self.L - 1}; site percolation at p=1/2"
        )

    def grid(self, word: int) -> np.ndarray:
        """Boolean L×L array of open sites."""
        N = self.sites
        raw = np.frombuffer(int(word).to_bytes((N + 7) // 8, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:N].astype(bool).reshape(self.L, self.L)

    def word(self, grid: np.ndarray) -> int:
        grid = np.asarray(grid, dtype=bool)
        if grid.shape != (self.L, self.L):
            raise DimensionMismatchError(f"grid of shape {grid.shape} on a {self.L}x{self.L} lattice")
        return int.from_bytes(np.packbits(grid.ravel(), bitorder="little").tobytes(), "little")

    def grids(self, words: np.ndarray) -> np.ndarray:
        """(B, L, L) open-site arrays for a vector of words (sites <= 63)."""
        words = np.asarray(words, dtype=np.uint64)
        shifts = np.arange(self.sites, dtype=np.uint64)
        return ((words[:, None] >> shifts) & np.uint64(1)).astype(bool).reshape(-1, self.L, self.L)


def _spans(labels: np.ndarray, first: np.ndarray, last: np.ndarray) -> np.ndarray:
    """Per batch entry: some cluster label occurs both in ``first`` and in ``last``."""
    size = int(labels.max()) + 1
    in_first = np.zeros(size, dtype=bool)
    in_last = np.zeros(size, dtype=bool)
    in_first[first.ravel()] = True
    in_last[last.ravel()] = True
    both = in_first & in_last
    both[0] = False
    return both[first].any(axis=1)


def has_crossing_batch(grids: np.ndarray) -> np.ndarray:
    """Left-right open crossing for each (L, L) grid of a (B, L, L) stack."""
    grids = np.asarray(grids, dtype=bool)
    if grids.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    labels, _ = ndimage.label(grids, structure=BATCH_STRUCTURE)
    return _spans(labels, labels[:, :, 0], labels[:, :, -1])


def has_crossing_grid(grid: np.ndarray) -> bool:
    labels, count = ndimage.label(grid, structure=STRUCTURE)
    if count == 0:
        return False
    return bool(np.intersect1d(labels[:, 0], labels[:, -1]).any())


def has_crossing(c: BitState, lat: HexLattice) -> bool:
    if c.n != lat.sites:
        raise DimensionMismatchError(f"configuration has {c.n} sites, lattice has {lat.sites}")
    return has_crossing_grid(lat.grid(c.bits))


def has_dual_crossing(c: BitState, lat: HexLattice) -> bool:
    """Top-bottom crossing by closed sites."""
    if c.n != lat.sites:
        raise DimensionMismatchError(f"configuration has {c.n} sites, lattice has {lat.sites}")
    return has_crossing_grid(~lat.grid(c.bits).T)


def crossing_set(lat: HexLattice, explicit: Optional[bool] = None) -> SetRep:
    """The left-right crossing event; explicit by enumeration when L² <= 16."""
    N = lat.sites
    if explicit is None:
        explicit = N <= PERCOLATION_EXPLICIT_MAX_SITES
    if explicit:
        if N > PERCOLATION_EXPLICIT_MAX_SITES:
            raise CapExceededError(
                f"explicit crossing sets are capped at L^2 <= {PERCOLATION_EXPLICIT_MAX_SITES} (got {N})"
            )
        member = has_crossing_batch(lat.grids(np.arange(1 << N, dtype=np.uint64)))
        return ExplicitSet(N, member, f"crossing({lat.L})")
    return OracleSet(N, lambda w: has_crossing_grid(lat.grid(w)), f"crossing({lat.L})")


def seed_crossing(lat: HexLattice) -> BitState:
    """Row 0 fully open, everything else closed."""
    return BitState((1 << lat.L) - 1, lat.sites)


def crossing_count(lat: HexLattice) -> int:
    """Number of crossing configurations, by enumeration in batches."""
    N = lat.sites
    if N > PERCOLATION_EXACT_MAX_SITES:
        raise CapExceededError(f"exact crossing probability is capped at L^2 <= {PERCOLATION_EXACT_MAX_SITES} (got {N})")
    total = 0
    for start in range(0, 1 << N, BATCH):
        words = np.arange(start, min(start + BATCH, 1 << N), dtype=np.uint64)
        total += int(has_crossing_batch(lat.grids(words)).sum())
    return total


def crossing_probability(lat: HexLattice, mode: str = "exact", samples: int = 100_000, seed: int = 0) -> CrossingProbability:
    if mode == "exact":
        value = Fraction(crossing_count(lat), 1 << lat.sites)
        deviation = float(value - Fraction(1, 2))
        if deviation:
            logger.warning(f"exact crossing probability {value} differs from 1/2 at L={lat.L}")
        return CrossingProbability(
            L=lat.L, mode="exact", value=Ratio.of(value), deviation_from_half=deviation, geometry=lat.geometry()
        )
    if mode != "mc":
        raise ValueError(f"unknown mode {mode!r}; expected 'exact' or 'mc'")
    if samples < 1:
        raise ValueError("Monte Carlo needs at least one sample")

    rng = make_rng(seed)
    batch = max(1, (1 << 22) // lat.sites)
    hits = 0
    for start in range(0, samples, batch):
        size = min(batch, samples - start)
        hits += int(has_crossing_batch(rng.random((size, lat.L, lat.L)) < 0.5).sum())
    p = hits / samples
    logger.info(f"crossing probability at L={lat.L}: {hits}/{samples}")
    return CrossingProbability(
        L=lat.L,
        mode="mc",
        value=p,
        std_error=math.sqrt(p * (1 - p) / samples),
        samples=samples,
        deviation_from_half=p - 0.5,
        geometry=lat.geometry(),
    )


def monotonicity_spot_check(lat: HexLattice, trials: int = 10_000, seed: int = 0) -> int:
    """Open one closed site of random crossing configurations; count lost crossings."""
    rng = make_rng(seed)
    failures = 0
    for _ in range(trials):
        grid = rng.random((lat.L, lat.L)) < 0.5
        if not has_crossing_grid(grid):
            continue
        closed = np.flatnonzero(~grid.ravel())
        if closed.size == 0:
            continue
        opened = grid.ravel().copy()
        opened[rng.choice(closed)] = True
        if not has_crossing_grid(opened.reshape(lat.L, lat.L)):
            failures += 1
    return failures


def crossing_run(lat: HexLattice, steps: int, seed: int, thin: int = 1, replica: int = 0) -> Trajectory:
    """Censored dynamics on the crossing event started from ``seed_crossing``."""
    cfg = ChainConfig(
        A=crossing_set(lat),
        x0=seed_crossing(lat).bits,
        steps=steps,
        seed=seed,
        thin=thin,
        monotone=True,
        replica=replica,
    )
    return run(cfg)


def sample_crossing(lat: HexLattice, steps: int, seed: int) -> BitState:
    final = crossing_run(lat, steps, seed, thin=max(1, steps)).final
    return BitState(final, lat.sites)


def render_config(c: BitState, lat: HexLattice) -> str:
    """L lines of 0/1 characters; line r lists sites (r, 0) .. (r, L-1)."""
    grid = lat.grid(c.bits)
    return "\n".join("".join("1" if open_ else "0" for open_ in row) for row in grid) + "\n"


def parse_config(text: str) -> Tuple[BitState, HexLattice]:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows:
        raise SpecParseError("empty percolation configuration")
    L = len(rows)
    for row in rows:
        if len(row) != L or any(ch not in "01" for ch in row):
            raise SpecParseError(f"configuration rows must be {L} characters of 0/1, got {row!r}")
    lat = HexLattice(L)
    grid = np.array([[ch == "1" for ch in row] for row in rows])
    return BitState(lat.word(grid), lat.sites), lat


def percolation_report(
    L: int,
    steps: int,
    seed: int,
    mode: Optional[str] = None,
    samples: int = 100_000,
) -> Tuple[BitState, PercolationReport]:
    """Run the crossing sampler and, optionally, estimate P[crossing]."""
    lat = HexLattice(L)
    logger.info(f"percolation run: {lat.geometry()}, steps={steps}, seed={seed}")
    traj = crossing_run(lat, steps, seed, thin=max(1, steps))
    final = BitState(traj.final, lat.sites)
    crossing = has_crossing(final, lat)
    if not crossing:
        raise ContractViolationError("the censored sampler left the crossing event")

    prob = None
    if mode is not None:
        prob = crossing_probability(lat, mode, samples=samples, seed=seed)
    passed = crossing
    if prob is not None and prob.mode == "exact":
        passed = passed and prob.deviation_from_half == 0
    elif prob is not None:
        passed = passed and abs(prob.deviation_from_half) <= 4 * max(prob.std_error, 1 / (2 * math.sqrt(samples)))

    return final, PercolationReport(
        L=L,
        steps=steps,
        seed=seed,
        geometry=lat.geometry(),
        final_crossing=crossing,
        open_sites=final.weight,
        accepted=traj.accepted,
        censored=traj.censored,
        holds=traj.holds,
        crossing_probability=prob,
        passed=passed,
    )


def duality_mismatches(lat: HexLattice) -> int:
    """Configurations where the open and closed crossings are not exactly one of two."""
    N = lat.sites
    if N > PERCOLATION_EXACT_MAX_SITES:
        raise CapExceededError(f"exhaustive duality checks are capped at L^2 <= {PERCOLATION_EXACT_MAX_SITES}")
    bad = 0
    for start in range(0, 1 << N, BATCH):
        grids = lat.grids(np.arange(start, min(start + BATCH, 1 << N), dtype=np.uint64))
        primal = has_crossing_batch(grids)
        dual = has_crossing_batch(~grids.transpose(0, 2, 1))
        bad += int((primal == dual).sum())
    return bad


def sampler_agreement(L: int, steps: int, thin: int, seed: int) -> dict:
    """Censored chain and rejection sampler against uniform on the crossing event.

    Returns the chain's TV distance to uniform on A and the worst per-state
    gap between the two samplers in units of their combined standard error.
    """
    lat = HexLattice(L)
    A = crossing_set(lat, explicit=True)
    traj = crossing_run(lat, steps, seed, thin=thin)
    chain_freq = empirical_distribution(traj.states, A)
    draws = rejection_samples(A, len(traj.states), seed + 1)
    reject_freq = empirical_distribution([d.state for d in draws], A)

    worst = 0.0
    for w, p in chain_freq.items():
        q = reject_freq[w]
        se = math.sqrt(p * (1 - p) / len(traj.states) + q * (1 - q) / len(draws))
        if se > 0:
            worst = max(worst, abs(p - q) / se)
    target = 1.0 / A.size
    return {
        "states": A.size,
        "samples": len(traj.states),
        "chain_tv": 0.5 * sum(abs(p - target) for p in chain_freq.values()),
        "max_sigma": worst,
        "mean_tries": float(np.mean([d.tries for d in draws])),
    }
