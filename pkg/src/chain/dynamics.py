"""Censored single-site resampling on a subset A of the hypercube.

From x in A: pick a coordinate i uniformly, re-randomise x_i to get y, move
to y if y is in A and stay at x otherwise. Proposals that leave x unchanged
are "holds"; proposals rejected because y is outside A are "censors".
"""
from collections import Counter
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from logs import logger
from src.chain.rng import ProposalStream, make_rng
from src.core.errors import ContractViolationError, SamplingExhaustedError
from src.core.parallel import parallel_map
from src.core.sets import ExplicitSet, SetRep, is_monotone, require_explicit
from src.core.states import BitState, random_state
from src.reports.structured import RejectionResult, Trajectory

ACCEPT, CENSOR, HOLD = "accept", "censor", "hold"


class ChainConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    A: SetRep
    x0: int
    steps: int = Field(..., ge=0)
    seed: int
    thin: int = Field(1, ge=1)
    monotone: bool = Field(False, description="A is asserted up-closed: up-moves skip the oracle")
    replica: int = 0

    @model_validator(mode="after")
    def _monotone_claim_holds(self) -> "ChainConfig":
        if self.monotone and self.A.is_explicit and not is_monotone(self.A):
            raise ContractViolationError(f"{self.A.name} is not up-closed; the monotone fast path would leave it")
        return self

    @property
    def n(self) -> int:
        return self.A.n


def _advance(x: int, i: int, b: int, contains, monotone: bool) -> Tuple[int, str]:
    if (x >> i) & 1 == b:
        return x, HOLD
    y = x ^ (1 << i)
    if (b == 1 and monotone) or contains(y):
        return y, ACCEPT
    return x, CENSOR


def step(x: Union[int, BitState], A: SetRep, rng: ProposalStream, monotone: bool = False) -> Union[int, BitState]:
    """One move of the censored chain; consumes exactly one (i, b) proposal."""
    word = x.bits if isinstance(x, BitState) else x
    if not A.contains(word):
        raise ContractViolationError(f"current state {word} is not in {A.name}")
    i, b = rng.draw()
    y, _ = _advance(word, i, b, A.contains, monotone)
    return BitState(y, A.n) if isinstance(x, BitState) else y


def run(cfg: ChainConfig) -> Trajectory:
    """Iterate ``step`` cfg.steps times from x0; deterministic given (seed, replica)."""
    A = cfg.A
    if not A.contains(cfg.x0):
        raise ContractViolationError(f"x0={cfg.x0} is not in {A.name}")

    stream = ProposalStream(A.n, cfg.seed, cfg.replica)
    contains, monotone, thin = A.contains, cfg.monotone, cfg.thin
    counts = {ACCEPT: 0, CENSOR: 0, HOLD: 0}
    steps, states, events = [], [], []
    x = cfg.x0
    for t in range(1, cfg.steps + 1):
        i, b = stream.draw()
        x, event = _advance(x, i, b, contains, monotone)
        counts[event] += 1
        if t % thin == 0:
            steps.append(t)
            states.append(x)
            events.append(event)

    logger.debug(f"run on {A.name}: {counts[ACCEPT]} accepted, {counts[CENSOR]} censored, {counts[HOLD]} holds")
    return Trajectory(
        steps=steps,
        states=states,
        events=events,
        accepted=counts[ACCEPT],
        censored=counts[CENSOR],
        holds=counts[HOLD],
        final=x,
    )


def _run_replica(job: Tuple[ChainConfig, int]) -> Trajectory:
    cfg, replica = job
    return run(cfg.model_copy(update={"replica": replica}))


def run_replicas(cfg: ChainConfig, replicas: int, workers: Optional[int] = None):
    # Oracle predicates are closures and do not cross process boundaries.
    if not cfg.A.is_explicit:
        workers = 1
    return parallel_map(_run_replica, [(cfg, r) for r in range(replicas)], workers)


def rejection_sample(A: SetRep, rng: np.random.Generator, max_tries: int) -> RejectionResult:
    """Uniform draws from {0,1}^n until one lands in A."""
    if max_tries < 1:
        raise ValueError("max_tries must be at least 1")
    for tries in range(1, max_tries + 1):
        x = random_state(A.n, rng)
        if A.contains(x):
            return RejectionResult(state=x, tries=tries)
    raise SamplingExhaustedError(f"no member of {A.name} in {max_tries} uniform draws", max_tries)


def rejection_samples(A: SetRep, count: int, seed: int, max_tries: int = 10**6):
    rng = make_rng(seed)
    return [rejection_sample(A, rng, max_tries) for _ in range(count)]


def empirical_distribution(samples: Sequence[int], A: SetRep) -> Dict[int, float]:
    """Frequency of each member of A among the samples (members never seen get 0)."""
    A = require_explicit(A, "empirical_distribution")
    if len(samples) == 0:
        raise ContractViolationError("no samples to tabulate")
    counts = Counter(int(s) for s in samples)
    outside = [s for s in counts if not A.contains(s)]
    if outside:
        raise ContractViolationError(f"{len(outside)} distinct sampled states lie outside {A.name}")
    total = sum(counts.values())
    return {int(w): counts.get(int(w), 0) / total for w in A.words()}


def empirical_tv(samples: Sequence[int], A: SetRep) -> float:
    """TV distance between the sample frequencies and uniform on A."""
    freqs = empirical_distribution(samples, A)
    target = 1.0 / len(freqs)
    return 0.5 * sum(abs(f - target) for f in freqs.values())


def empirical_transitions(states: Sequence[int], A: ExplicitSet) -> np.ndarray:
    """Transition counts between consecutive recorded states, indexed like A.words()."""
    words = A.words()
    index = {int(w): k for k, w in enumerate(words)}
    counts = np.zeros((len(words), len(words)), dtype=np.int64)
    for a, b in zip(states, states[1:]):
        counts[index[a], index[b]] += 1
    return counts
