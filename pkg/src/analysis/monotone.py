"""Distance to monotonicity and the edge-violation rate of a set.

δ(S) counts covering pairs (x, x + e_i) with x in S and x + e_i outside S,
normalised by n·2^n (or weighted by μ(x)/n for a general measure). ε(S) is
the measure of the smallest symmetric difference with a monotone set.
"""
import math
from fractions import Fraction
from typing import Optional, Tuple

import networkx as nx
import numpy as np

from config import BRUTEFORCE_MAX_DIM, EXPLICIT_MAX_DIM
from logs import logger
from src.catalog.enumerate import monotone_masks, subset_masks
from src.core.errors import CapExceededError, CertificateViolationError, RepresentationError
from src.core.measures import Measure, UniformCube, WeightTable, check_dims, require_normalized
from src.core.parallel import parallel_map
from src.core.sets import ExplicitSet, SetRep, require_explicit, violating_mask
from src.core.states import cover_pairs, random_state
from src.reports.structured import (
    GGLRSReport,
    MonotoneDistance,
    Ratio,
    SampledDelta,
    SetPayload,
    SweepReport,
    ViolationStats,
)

# Float weights become integer capacities at this resolution for the flow solver.
CAPACITY_SCALE = 1 << 50
WEIGHTED_TOL = 1e-9


def _resolve(S: SetRep, m: Optional[Measure], operation: str) -> Tuple[ExplicitSet, Measure]:
    S = require_explicit(S, operation)
    m = m if m is not None else UniformCube(S.n)
    check_dims(m, S)
    require_normalized(m)
    return S, m


def delta_exact(S: SetRep, m: Optional[Measure] = None) -> ViolationStats:
    S, m = _resolve(S, m, "delta_exact")
    n = S.n
    viol = violating_mask(S)
    count = int(viol.sum())
    if m.is_uniform:
        delta = Fraction(count, n << n) if n else Fraction(0)
        return ViolationStats(n=n, violating_pairs=count, delta=Ratio.of(delta))
    per_state = viol.sum(axis=0)
    delta = float(per_state @ m.weights()) / n if n else 0.0
    return ViolationStats(n=n, violating_pairs=count, delta=delta)


def delta_sampled(S: SetRep, m: Measure, samples: int, rng: np.random.Generator, seed: int = 0) -> SampledDelta:
    """Monte Carlo δ under the uniform measure, for oracle or explicit sets.

    Draws a uniform (state, coordinate) pair and counts it when x_i = 0,
    x is in S and x + e_i is not: the probability of that event is δ(S).
    """
    if not m.is_uniform:
        raise RepresentationError(f"sampled delta draws uniform states; got {m!r}")
    check_dims(m, S)
    if samples < 1:
        raise ValueError("samples must be at least 1")
    n = S.n
    violations = 0
    for _ in range(samples):
        x = random_state(n, rng)
        i = int(rng.integers(n))
        bit = 1 << i
        if not x & bit and S.contains(x) and not S.contains(x | bit):
            violations += 1
    p = violations / samples
    return SampledDelta(
        samples=samples,
        violations=violations,
        estimate=p,
        std_error=math.sqrt(p * (1 - p) / samples),
        seed=seed,
    )


def _uniform_count(S: ExplicitSet, A: ExplicitSet) -> int:
    return int((S.member ^ A.member).sum())


def epsilon_bruteforce(S: SetRep, m: Optional[Measure] = None) -> MonotoneDistance:
    S, m = _resolve(S, m, "epsilon_bruteforce")
    n = S.n
    if n > BRUTEFORCE_MAX_DIM:
        raise CapExceededError(f"brute-force epsilon enumerates monotone sets only for n <= {BRUTEFORCE_MAX_DIM}; use epsilon_mincut")
    masks = monotone_masks(n)
    words = np.arange(1 << n, dtype=np.uint64)
    membership = ((masks[:, None] >> words[None, :]) & np.uint64(1)).astype(bool)
    diff = membership ^ S.member[None, :]
    if m.is_uniform:
        counts = diff.sum(axis=1)
        best = int(np.argmin(counts))
        k = int(counts[best])
        witness = ExplicitSet(n, membership[best], "nearest-monotone")
        return MonotoneDistance(epsilon=Ratio.of(Fraction(k, 1 << n)), epsilon_count=k, witness=witness, method="brute-force")
    values = diff @ m.weights()
    best = int(np.argmin(values))
    witness = ExplicitSet(n, membership[best], "nearest-monotone")
    return MonotoneDistance(epsilon=float(values[best]), witness=witness, method="brute-force")


def closure_network(S: ExplicitSet, capacities: np.ndarray) -> Tuple[nx.DiGraph, int]:
    """Flow network whose minimum cuts are nearest monotone sets.

    Sink side = the monotone set A. Source arcs feed states outside S (cut
    when they join A), sink arcs drain states of S (cut when they leave A),
    and uncuttable arcs y -> x on every cover x < y keep the sink side
    closed upward.
    """
    n = S.n
    infinite = int(capacities.sum()) + 1
    G = nx.DiGraph()
    G.add_nodes_from(range(1 << n))
    G.add_nodes_from(("s", "t"))
    for x in range(1 << n):
        c = int(capacities[x])
        if c == 0:
            continue
        if S.member[x]:
            G.add_edge(x, "t", capacity=c)
        else:
            G.add_edge("s", x, capacity=c)
    G.add_edges_from((y, x, {"capacity": infinite}) for x, y, _ in cover_pairs(n))
    return G, infinite


def epsilon_mincut(S: SetRep, m: Optional[Measure] = None) -> MonotoneDistance:
    S, m = _resolve(S, m, "epsilon_mincut")
    n = S.n
    if n > EXPLICIT_MAX_DIM:
        raise CapExceededError(f"min-cut epsilon is capped at n <= {EXPLICIT_MAX_DIM}")
    if m.is_uniform:
        capacities = np.ones(1 << n, dtype=np.int64)
    else:
        capacities = np.rint(m.weights() * CAPACITY_SCALE).astype(np.int64)

    G, _ = closure_network(S, capacities)
    cut_value, (_, sink_side) = nx.minimum_cut(G, "s", "t")
    member = np.zeros(1 << n, dtype=bool)
    member[np.fromiter((w for w in sink_side if w != "t"), dtype=np.int64)] = True
    witness = ExplicitSet(n, member, "nearest-monotone")
    logger.debug(f"min-cut on {G.number_of_nodes()} nodes, cut value {cut_value}")

    if m.is_uniform:
        k = _uniform_count(S, witness)
        if k != cut_value:
            raise CertificateViolationError(f"cut value {cut_value} disagrees with witness distance {k}")
        return MonotoneDistance(epsilon=Ratio.of(Fraction(k, 1 << n)), epsilon_count=k, witness=witness, method="min-cut")
    epsilon = float(m.weights()[S.member ^ witness.member].sum())
    return MonotoneDistance(epsilon=epsilon, witness=witness, method="min-cut")


def epsilon(S: SetRep, m: Optional[Measure] = None, method: str = "auto") -> MonotoneDistance:
    if method == "auto":
        method = "bruteforce" if S.n <= BRUTEFORCE_MAX_DIM else "mincut"
    if method == "bruteforce":
        return epsilon_bruteforce(S, m)
    if method == "mincut":
        return epsilon_mincut(S, m)
    raise ValueError(f"unknown epsilon method {method!r}")


def check_gglrs(S: SetRep, method: str = "auto") -> GGLRSReport:
    """δ(S) >= ε(S)/n in integers.

    With δ = v/(n·2^n) and ε = k/2^n the inequality is exactly v >= k.
    """
    S = require_explicit(S, "check_gglrs")
    stats = delta_exact(S)
    dist = epsilon(S, method=method)
    passed = stats.violating_pairs >= dist.epsilon_count
    if not passed:
        logger.warning(f"GGLRS inequality fails on {S.name}: v={stats.violating_pairs} < k={dist.epsilon_count}")
    return GGLRSReport(
        n=S.n,
        set=SetPayload.of(S),
        delta=stats.delta,
        epsilon=dist.epsilon,
        violating_pairs=stats.violating_pairs,
        epsilon_count=dist.epsilon_count,
        method=dist.method,
        passed=passed,
    )


def violation_counts(n: int, masks: np.ndarray) -> np.ndarray:
    """|Ψ(S)| for a vector of subset bitmasks."""
    one = np.uint64(1)
    v = np.zeros(masks.shape, dtype=np.int64)
    for x, y, _ in cover_pairs(n):
        v += (((masks >> np.uint64(x)) & one) & ~((masks >> np.uint64(y)) & one)).astype(np.int64)
    return v


def distance_counts(n: int, masks: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Uniform ε-counts min_A |S ⊕ A| for a vector of subset bitmasks."""
    monotone = monotone_masks(n)
    out = np.empty(masks.shape, dtype=np.int64)
    for start in range(0, masks.size, chunk):
        block = masks[start:start + chunk]
        out[start:start + chunk] = np.bitwise_count(block[:, None] ^ monotone[None, :]).min(axis=1)
    return out


def _mincut_count(job: Tuple[int, int]) -> int:
    n, mask = job
    return epsilon_mincut(ExplicitSet.from_mask(n, mask)).epsilon_count


def gglrs_sweep(n: int, mincut_sample: int = 1000, seed: int = 0, workers: Optional[int] = None) -> SweepReport:
    """Check v >= k on every subset of {0,1}^n (n <= 4).

    ε-counts come from the Dedekind list; a seeded sample of subsets is
    re-solved with the min-cut reduction as a cross-check.
    """
    masks = subset_masks(n)
    logger.info(f"GGLRS sweep over {masks.size} subsets at n={n}")
    v = violation_counts(n, masks)
    k = distance_counts(n, masks)
    slack = v - k
    failures = int((slack < 0).sum())

    rng = np.random.Generator(np.random.Philox(seed))
    size = min(mincut_sample, masks.size)
    picked = masks if size == masks.size else rng.choice(masks, size=size, replace=False)
    cut_counts = parallel_map(_mincut_count, [(n, int(mask)) for mask in picked], workers)
    mismatches = int(sum(c != int(k[int(mask)]) for c, mask in zip(cut_counts, picked)))
    if mismatches:
        logger.warning(f"{mismatches} min-cut distances disagree with brute force at n={n}")

    return SweepReport(
        n=n,
        subsets=int(masks.size),
        monotone_sets=int(monotone_masks(n).size),
        failures=failures,
        tight=int(((slack == 0) & (k > 0)).sum()),
        min_slack=int(slack.min()),
        mincut_checked=size,
        mincut_mismatches=mismatches,
        passed=failures == 0 and mismatches == 0,
    )


def _crosscheck_one(job: Tuple[int, int, int]) -> Tuple[bool, bool]:
    n, mask, seed = job
    S = ExplicitSet.from_mask(n, mask)
    uniform_ok = epsilon_mincut(S).epsilon_count == epsilon_bruteforce(S).epsilon_count
    rng = np.random.Generator(np.random.Philox(seed + mask))
    m = WeightTable(n, rng.random(1 << n), normalize=True)
    weighted_ok = abs(float(epsilon_mincut(S, m).epsilon) - float(epsilon_bruteforce(S, m).epsilon)) <= WEIGHTED_TOL
    return uniform_ok, weighted_ok


def crosscheck_mincut(n: int, sample: Optional[int] = None, seed: int = 0, workers: Optional[int] = None) -> Tuple[int, int, int]:
    """Min-cut against brute force on every subset, or a seeded sample of them.

    Each subset is solved under the uniform measure (exact counts) and under a
    random normalised weight table (agreement within 1e-9). Returns
    (checked, uniform mismatches, weighted mismatches).
    """
    masks = subset_masks(n)
    if sample is not None and sample < masks.size:
        rng = np.random.Generator(np.random.Philox(seed))
        masks = rng.choice(masks, size=sample, replace=False)
    results = parallel_map(_crosscheck_one, [(n, int(mask), seed) for mask in masks], workers)
    uniform_bad = sum(not u for u, _ in results)
    weighted_bad = sum(not w for _, w in results)
    if uniform_bad or weighted_bad:
        logger.warning(f"min-cut disagrees with brute force at n={n}: {uniform_bad} uniform, {weighted_bad} weighted")
    return len(results), uniform_bad, weighted_bad
