#nodes.py

from typing import List

from logs import log_separator, logger
from src.analysis.monotone import crosscheck_mincut, delta_exact, gglrs_sweep
from src.catalog.enumerate import enumerate_monotone
from src.catalog.specs import catalog_sets
from src.core.sets import ExplicitSet, is_monotone
from src.ising.curie_weiss import (
    counterexample_delta,
    counterexample_set,
    cw_measure,
    ising_report,
    transport_verify,
)
from src.percolation.lattice import (
    HexLattice,
    crossing_probability,
    crossing_set,
    duality_mismatches,
    sampler_agreement,
)
from src.reports.structured import SuiteResult, VerifyReport
from src.spectral.bounds import corollary_bound, example_slow_family, theorem1_certificate
from src.spectral.kernel import build_kernel, mixing_time, mixing_time_rational, tv_curve
from src.workflow.state import VerifyState
from src.workflow.utils import next_suite, stopwatch

SUITES = ("gglrs", "mincut", "theorem1", "corollary", "example", "percolation", "ising")

EXAMPLE_CASES = ((4, 2), (6, 3))
DELTA_CROSSCHECK_BETAS = (0.0, 0.5, 1.0, 2.0)
EPSILON_BETAS = (0.0, 1.0, 2.0, 3.0)
ISING_SWEEP = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
PERCOLATION_THIN = 20
PERCOLATION_TV_MAX = 0.02
PERCOLATION_SIGMAS = 4.0


def _certified_sets(n_max: int) -> List[ExplicitSet]:
    """Every nonempty monotone set up to n = 3, plus the n = 4 catalog."""
    sets = [S for n in range(1, min(n_max, 3) + 1) for S in enumerate_monotone(n) if S.size]
    if n_max >= 4:
        sets += catalog_sets(4)
    return sets


def _result(name: str, seconds: float, checked: int, failures: int, **details) -> SuiteResult:
    passed = failures == 0
    logger.info(f"suite {name}: {checked} checked, {failures} failures ({seconds:.2f}s)")
    return SuiteResult(name=name, passed=passed, checked=checked, failures=failures, details=details)


def planner_node(state: VerifyState):
    logger.info("Planning verification suites")
    requested = state.get("suites") or list(SUITES)
    unknown = sorted(set(requested) - set(SUITES))
    if unknown:
        raise ValueError(f"unknown suites {unknown}; known: {', '.join(SUITES)}")
    plan = [s for s in SUITES if s in requested]
    logger.info(f"plan: {plan}")
    return {"plan": plan, "step_count": 0}


def dispatch_node(state: VerifyState):
    suite = next_suite(state["step_count"], state["plan"])
    if suite != "summarize":
        log_separator(f"SUITE {suite.upper()}", char="-")
    return {"current_suite": suite, "step_count": state["step_count"] + 1}


def gglrs_node(state: VerifyState):
    with stopwatch() as elapsed:
        sweeps = [gglrs_sweep(n, seed=state["seed"], workers=state["workers"]) for n in range(1, min(state["n_max"], 4) + 1)]
    failures = sum(s.failures + s.mincut_mismatches for s in sweeps)
    return {"results": [_result(
        "gglrs",
        elapsed(),
        sum(s.subsets for s in sweeps),
        failures,
        tight={s.n: s.tight for s in sweeps},
        min_slack={s.n: s.min_slack for s in sweeps},
    )]}


def mincut_node(state: VerifyState):
    with stopwatch() as elapsed:
        rows = []
        for n in range(1, min(state["n_max"], 4) + 1):
            sample = 1000 if n == 4 else None
            rows.append((n, *crosscheck_mincut(n, sample, state["seed"], state["workers"])))
    return {"results": [_result(
        "mincut",
        elapsed(),
        sum(r[1] for r in rows),
        sum(r[2] + r[3] for r in rows),
        per_dimension={n: {"checked": c, "uniform_mismatches": u, "weighted_mismatches": w} for n, c, u, w in rows},
    )]}


def theorem1_node(state: VerifyState):
    with stopwatch() as elapsed:
        reports = [theorem1_certificate(A, workers=state["workers"]) for A in _certified_sets(state["n_max"])]
    failing = [r.set.name for r in reports if not r.passed]
    return {"results": [_result(
        "theorem1",
        elapsed(),
        len(reports),
        len(failing),
        vacuous=sum(r.conductance.vacuous for r in reports),
        small_set_branch=sum(bool(r.small_set_branch) for r in reports),
        psi_outside_boundary=sum(r.psi_within_boundary is False for r in reports),
        failing=failing,
    )]}


def corollary_node(state: VerifyState):
    with stopwatch() as elapsed:
        sets = _certified_sets(state["n_max"])
        reports = [corollary_bound(A) for A in sets]
        failures = sum(not r.passed for r in reports)

        # Full cube at n = 2: d(t) = 2^-(t+1), so the mixing time is 1.
        K = build_kernel(ExplicitSet.full(2))
        curve = tv_curve(K, 0, 8)
        closed_form = all(abs(d - 2.0 ** -(t + 2)) < 1e-12 for t, d in enumerate(curve))
        full_cube_ok = closed_form and mixing_time(K) == 1
        failures += not full_cube_ok

        rational_bad = 0
        small = [A for A in sets if A.n <= 3]
        for A in small:
            K = build_kernel(A)
            if mixing_time_rational(K) != mixing_time(K):
                rational_bad += 1
        failures += rational_bad

    worst = max(reports, key=lambda r: (r.mixing_time or 0) / r.bound)
    return {"results": [_result(
        "corollary",
        elapsed(),
        len(reports) + 1 + len(small),
        failures,
        full_cube_n2=full_cube_ok,
        rational_mismatches=rational_bad,
        tightest=worst.set.name,
        tightest_ratio=(worst.mixing_time or 0) / worst.bound,
    )]}


def example_node(state: VerifyState):
    with stopwatch() as elapsed:
        reports = [example_slow_family(n, m, state["workers"])[1] for n, m in EXAMPLE_CASES]
    return {"results": [_result(
        "example",
        elapsed(),
        len(reports),
        sum(not r.passed for r in reports),
        cases=[r.model_dump(mode="json") for r in reports],
    )]}


def percolation_node(state: VerifyState):
    with stopwatch() as elapsed:
        failures = 0
        exact = {}
        for L in range(1, 5):
            prob = crossing_probability(HexLattice(L), "exact")
            exact[L] = str(prob.value.to_fraction())
            failures += prob.deviation_from_half != 0

        dual_bad = sum(duality_mismatches(HexLattice(L)) for L in range(1, 4))
        failures += dual_bad
        failures += not is_monotone(crossing_set(HexLattice(2), explicit=True))

        agreement = sampler_agreement(2, state["perc_steps"], PERCOLATION_THIN, state["seed"])
        failures += agreement["chain_tv"] >= PERCOLATION_TV_MAX
        failures += agreement["max_sigma"] > PERCOLATION_SIGMAS

        mc = crossing_probability(HexLattice(32), "mc", samples=state["perc_samples"], seed=state["seed"])
        failures += abs(mc.deviation_from_half) > PERCOLATION_SIGMAS * mc.std_error
    return {"results": [_result(
        "percolation",
        elapsed(),
        4 + 3 + 1 + 2 + 1,
        int(failures),
        exact=exact,
        duality_mismatches=dual_bad,
        sampler=agreement,
        mc_L32={"value": mc.value, "std_error": mc.std_error, "samples": mc.samples},
    )]}


def ising_node(state: VerifyState):
    with stopwatch() as elapsed:
        failures = checked = 0
        for beta in DELTA_CROSSCHECK_BETAS:
            generic = delta_exact(counterexample_set(4), cw_measure(4, beta)).delta
            checked += 1
            failures += abs(float(generic) - counterexample_delta(4, beta)) > 1e-12

        sizes = list(range(4, state["ising_n_max"] + 1, 2))
        worst_eps = 1.0
        for n in sizes:
            report = ising_report(n, EPSILON_BETAS if n > 4 else ISING_SWEEP, state["workers"])
            checked += len(report.points) + 1
            failures += sum(not p.passed for p in report.points) + (not report.delta_strictly_decreasing)
            worst_eps = min(worst_eps, *(p.epsilon_A for p in report.points))

        transport = transport_verify(4, 3.0)
        checked += 1
        failures += not transport.headline_holds
    return {"results": [_result(
        "ising",
        elapsed(),
        checked,
        int(failures),
        dimensions=sizes,
        min_epsilon=worst_eps,
        transport_min=transport.min_symmetric_difference,
        transport_failures=transport.transport_failures,
    )]}


def summarize_node(state: VerifyState):
    results = state["results"]
    report = VerifyReport(n_max=state["n_max"], suites=results, passed=all(r.passed for r in results))
    logger.info(f"verify-all: {sum(r.passed for r in results)}/{len(results)} suites passed")
    return {"report": report}


SUITE_NODES = {
    "gglrs": gglrs_node,
    "mincut": mincut_node,
    "theorem1": theorem1_node,
    "corollary": corollary_node,
    "example": example_node,
    "percolation": percolation_node,
    "ising": ising_node,
}
