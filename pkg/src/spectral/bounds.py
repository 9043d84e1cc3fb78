"""The conductance lower bound, the mixing-time corollary and the slow-mixing family."""
import math
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from config import CONDUCTANCE_MAX_STATES, EIGEN_MAX_STATES
from logs import logger
from src.core.errors import CertificateViolationError, ContractViolationError
from src.core.sets import ExplicitSet, SetRep, is_monotone, require_explicit, violating_mask
from src.reports.structured import (
    AnalyzeReport,
    ConductanceResult,
    CorollaryReport,
    ExampleReport,
    MixingReport,
    Ratio,
    SetPayload,
    Theorem1Report,
)
from src.spectral.conductance import conductance_exact, cut_ratio, witness_set
from src.spectral.kernel import build_kernel, hitting_time, mixing_time, spectral_gap


def probability(A: ExplicitSet) -> Fraction:
    return Fraction(A.size, 1 << A.n)


def _require_monotone(A: SetRep, operation: str) -> ExplicitSet:
    A = require_explicit(A, operation)
    if A.size == 0:
        raise ContractViolationError(f"{operation} needs a nonempty set")
    if not is_monotone(A):
        raise ContractViolationError(f"{operation} needs a monotone set; {A.name} is not")
    return A


def psi_within_boundary(A: ExplicitSet, B: ExplicitSet) -> bool:
    """Every violating pair (x, y) of B has y in A, so Ψ(B) ⊆ ∂_E B."""
    viol = violating_mask(B)
    words = np.arange(1 << A.n)
    return all(A.member[words[viol[i]] | (1 << i)].all() for i in range(A.n))


def theorem1_certificate(A: SetRep, conductance: Optional[ConductanceResult] = None, workers: Optional[int] = None) -> Theorem1Report:
    """φ(A) >= P(A)/(16n) for a monotone A, with the witness cut."""
    A = _require_monotone(A, "theorem1_certificate")
    conductance = conductance or conductance_exact(A, workers)
    p = probability(A)
    if conductance.vacuous:
        return Theorem1Report(set=SetPayload.of(A), probability=Ratio.of(p), conductance=conductance, passed=True)

    B = witness_set(A, conductance)
    passed = conductance.phi.to_fraction() >= conductance.lower_bound.to_fraction()
    if not passed:
        logger.warning(f"conductance bound fails on {A.name}: phi={conductance.phi} < {conductance.lower_bound}")
    return Theorem1Report(
        set=SetPayload.of(A),
        probability=Ratio.of(p),
        conductance=conductance,
        small_set_branch=p * probability(B) < Fraction(8, 1 << A.n),
        psi_within_boundary=psi_within_boundary(A, B),
        passed=passed,
    )


def corollary_value(n: int, p: Fraction) -> float:
    """2·(16n/P(A))²·log(4·2^n·P(A)), natural log."""
    return 2 * (16 * n / float(p)) ** 2 * math.log(4 * (1 << n) * float(p))


def corollary_bound(A: SetRep, tau: Optional[int] = None, capped: bool = False) -> CorollaryReport:
    A = _require_monotone(A, "corollary_bound")
    p = probability(A)
    bound = corollary_value(A.n, p)
    if tau is None and not capped:
        tau = mixing_time(build_kernel(A))
        capped = tau is None
    passed = tau is not None and tau <= bound
    if not passed:
        logger.warning(f"mixing-time corollary not confirmed on {A.name}: tau={tau}, bound={bound:.1f}")
    return CorollaryReport(
        set=SetPayload.of(A), probability=Ratio.of(p), bound=bound, mixing_time=tau, capped=capped, passed=passed
    )


def slow_family_set(n: int, m: int) -> ExplicitSet:
    """{x: x_0 = … = x_{m-1} = 1} ∪ {x: x_m = … = x_{2m-1} = 1}."""
    if not n >= 2 * m >= 2:
        raise ContractViolationError(f"the slow family needs n >= 2m >= 2, got n={n}, m={m}")
    words = np.arange(1 << n, dtype=np.int64)
    first, second = (1 << m) - 1, ((1 << m) - 1) << m
    member = ((words & first) == first) | ((words & second) == second)
    return ExplicitSet(n, member, f"subcube-union({n},{m})")


def example_slow_family(n: int, m: int, workers: Optional[int] = None) -> Tuple[ExplicitSet, ExampleReport]:
    A = slow_family_set(n, m)
    p = probability(A)
    expected = Fraction(1, 1 << (m - 1)) - Fraction(1, 1 << (2 * m))
    if p != expected:
        raise CertificateViolationError(f"P(A)={p} differs from inclusion-exclusion {expected}")

    first = (1 << m) - 1
    words = np.arange(1 << n, dtype=np.int64)
    B = ExplicitSet(n, (words & first) == first, "first-subcube")
    C = ExplicitSet(n, A.member & ~B.member, "second-subcube-only")
    phi_B, phi_C = cut_ratio(A, B), cut_ratio(A, C)
    phi_bound = Fraction(1, 1 << m)
    lower = 2.0 ** (m - 4)

    phi = tau = hit = None
    if A.size <= CONDUCTANCE_MAX_STATES:
        phi = conductance_exact(A, workers).phi.to_fraction()
    if A.size <= EIGEN_MAX_STATES:
        K = build_kernel(A)
        tau = mixing_time(K)
        # Start at 1^m 0^(n-m) and wait for the all-ones state.
        hit = hitting_time(K, first, (1 << n) - 1)

    phi_ok = None if phi is None else phi <= phi_bound
    tau_ok = None if tau is None else tau >= lower
    passed = phi_B <= phi_bound and phi_C <= phi_bound and phi_ok is not False and tau_ok is not False
    return A, ExampleReport(
        n=n,
        m=m,
        size=A.size,
        probability=Ratio.of(p),
        paper_probability=Ratio.of(Fraction(1, 1 << (m - 1))),
        first_subcube_phi=Ratio.of(phi_B),
        first_subcube_admissible=2 * B.size <= A.size,
        complement_phi=Ratio.of(phi_C),
        phi=None if phi is None else Ratio.of(phi),
        phi_bound=Ratio.of(phi_bound),
        phi_within_bound=phi_ok,
        mixing_time=tau,
        mixing_lower_bound=lower,
        hitting_time=hit,
        mixing_within_bound=tau_ok,
        passed=passed,
    )


def mixing_report(A: ExplicitSet, eps: float = 0.25) -> MixingReport:
    K = build_kernel(A)
    tau = mixing_time(K, eps)
    n = A.n
    return MixingReport(
        states=K.size,
        epsilon=eps,
        mixing_time=tau,
        capped=tau is None,
        spectral_gap=spectral_gap(K),
        n_log_n_ratio=None if tau is None or n < 2 else tau / (n * math.log(n)),
    )


def cheeger_sandwich(phi: Fraction, gap: float, tol: float = 1e-12) -> bool:
    """φ²/8 <= gap <= φ.

    The chain's bottleneck ratio Q(S, S^c)/π(S) equals Φ(S)/2, so the usual
    Φ*²/2 <= gap <= 2Φ* reads as above in terms of φ.
    """
    phi = float(phi)
    return phi * phi / 8 - tol <= gap <= phi + tol


def analyze(A: SetRep, conductance: bool = True, mix: bool = True, certify: bool = False,
            workers: Optional[int] = None) -> AnalyzeReport:
    A = require_explicit(A, "analyze")
    monotone = is_monotone(A)
    cond = conductance_exact(A, workers) if (conductance or certify) else None
    mixing = mixing_report(A) if (mix or certify) else None

    cheeger = None
    if cond is not None and mixing is not None and not cond.vacuous:
        cheeger = cheeger_sandwich(cond.phi.to_fraction(), mixing.spectral_gap)

    theorem1 = corollary = None
    if certify:
        if not monotone:
            raise ContractViolationError(f"--certify needs a monotone set; {A.name} is not")
        theorem1 = theorem1_certificate(A, cond)
        corollary = corollary_bound(A, mixing.mixing_time, mixing.capped)

    passed = all(flag is not False for flag in (
        cheeger,
        None if theorem1 is None else theorem1.passed,
        None if corollary is None else corollary.passed,
    ))
    return AnalyzeReport(
        set=SetPayload.of(A),
        monotone=monotone,
        probability=Ratio.of(probability(A)),
        conductance=cond,
        mixing=mixing,
        cheeger_holds=cheeger,
        theorem1=theorem1,
        corollary=corollary,
        passed=passed,
    )
