"""The Curie–Weiss counterexample to a measure-weighted δ >= ε/n.

A = {x : |x| <= n/2} for even n. Every covering pair leaving A starts on the
middle level, so δ(A) = μ(A_{n/2})/2, which vanishes as β grows; ε(A) stays
bounded away from zero.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import EXPLICIT_MAX_DIM, ISING_EPSILON_SLACK
from logs import logger
from src.analysis.monotone import epsilon_mincut
from src.catalog.enumerate import monotone_masks
from src.core.errors import CapExceededError, ContractViolationError, SpecParseError
from src.core.measures import CurieWeiss
from src.core.parallel import parallel_map
from src.core.sets import ExplicitSet
from src.core.states import popcounts, word_to_string
from src.reports.structured import CounterexampleReport, IsingReport, TransportReport

EPSILON_FLOOR = 1 / 6
TRANSPORT_MAX_DIM = 4


def _require_even(n: int):
    if n < 2 or n % 2:
        raise ContractViolationError(f"the counterexample needs an even n >= 2, got {n}")


def cw_measure(n: int, beta: float) -> CurieWeiss:
    _require_even(n)
    return CurieWeiss(n, beta)


def counterexample_set(n: int) -> ExplicitSet:
    _require_even(n)
    return ExplicitSet(n, popcounts(n) <= n // 2, f"lower-half({n})")


def counterexample_delta(n: int, beta: float) -> float:
    """μ(A_{n/2}) · (n/2) / n."""
    return cw_measure(n, beta).level_mass(n // 2) / 2


def counterexample_epsilon(n: int, beta: float) -> Tuple[float, ExplicitSet]:
    if n > EXPLICIT_MAX_DIM:
        raise CapExceededError(f"min-cut epsilon is capped at n <= {EXPLICIT_MAX_DIM} (got n={n})")
    dist = epsilon_mincut(counterexample_set(n), cw_measure(n, beta))
    return float(dist.epsilon), dist.witness


def counterexample_report(n: int, beta: float) -> CounterexampleReport:
    mu = cw_measure(n, beta)
    mu_mid = mu.level_mass(n // 2)
    mu_A = float(mu.level_prob[: n // 2 + 1].sum())
    delta = mu_mid / 2
    eps, _ = counterexample_epsilon(n, beta)
    eps_ok = eps >= EPSILON_FLOOR - ISING_EPSILON_SLACK
    delta_ok = delta <= mu_mid
    if not eps_ok:
        logger.warning(f"epsilon(A)={eps:.6g} below 1/6 at n={n}, beta={beta}")
    return CounterexampleReport(
        n=n,
        beta=beta,
        hamiltonian=mu.describe()["hamiltonian"],
        mu_A=mu_A,
        mu_mid=mu_mid,
        delta_A=delta,
        epsilon_A=eps,
        ratio_n_delta_over_epsilon=n * delta / eps,
        epsilon_at_least_sixth=eps_ok,
        delta_at_most_mu_mid=delta_ok,
        passed=eps_ok and delta_ok,
    )


def _report_job(job: Tuple[int, float]) -> CounterexampleReport:
    return counterexample_report(*job)


def beta_sweep(n: int, betas: Sequence[float], workers: Optional[int] = None) -> List[CounterexampleReport]:
    logger.info(f"Curie-Weiss sweep at n={n} over {len(betas)} temperatures")
    return parallel_map(_report_job, [(n, float(b)) for b in betas], workers)


def transport_verify(n: int, beta: float) -> TransportReport:
    """μ(A ⊕ B) over every monotone B, by exhaustion."""
    if n > TRANSPORT_MAX_DIM:
        raise CapExceededError(f"exhaustive transport checks are capped at n <= {TRANSPORT_MAX_DIM} (got n={n})")
    A = counterexample_set(n)
    w = cw_measure(n, beta).weights()
    masks = monotone_masks(n)
    members = ((masks[:, None] >> np.arange(1 << n, dtype=np.uint64)) & np.uint64(1)).astype(bool)

    mu_A = float(w[A.member].sum())
    mu_B = members @ w
    mu_diff = (members ^ A.member) @ w
    inside = (members & A.member) @ w
    outside = (members & ~A.member) @ w
    slack = ISING_EPSILON_SLACK

    best = int(np.argmin(mu_diff))
    lower = np.maximum(mu_A - mu_B, mu_B / 2)
    headline = bool(mu_diff[best] >= EPSILON_FLOOR - slack)
    report = TransportReport(
        n=n,
        beta=beta,
        monotone_sets=int(masks.size),
        min_symmetric_difference=float(mu_diff[best]),
        minimizer=[word_to_string(x, n) for x in np.flatnonzero(members[best])],
        headline_holds=headline,
        bound_violations=int((mu_diff < lower - slack).sum()),
        transport_failures=int((outside < inside - slack).sum()),
        passed=headline,
    )
    if report.transport_failures:
        logger.info(f"{report.transport_failures} monotone sets put more mass inside A than outside at n={n}")
    return report


def ising_report(n: int, betas: Sequence[float], workers: Optional[int] = None) -> IsingReport:
    points = beta_sweep(n, sorted(betas), workers)
    deltas = [p.delta_A for p in points]
    decreasing = all(b < a for a, b in zip(deltas, deltas[1:]))
    transport = None
    if n <= TRANSPORT_MAX_DIM:
        transport = transport_verify(n, max(betas))
    passed = all(p.passed for p in points) and decreasing and (transport is None or transport.passed)
    return IsingReport(n=n, points=points, delta_strictly_decreasing=decreasing, transport=transport, passed=passed)


def beta_grid(text: str) -> List[float]:
    """'start:stop:step' inclusive of stop, or a single value."""
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise SpecParseError(f"cannot parse beta sweep {text!r}; expected e.g. '0:4:0.5'") from None
    if len(values) == 1:
        return values
    if len(values) != 3 or values[2] <= 0 or values[1] < values[0]:
        raise SpecParseError(f"beta sweep must be start:stop:step with step > 0 and stop >= start, got {text!r}")
    start, stop, step = values
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, 12) for k in range(count)]
