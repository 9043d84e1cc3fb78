import numpy as np
import pytest

from src.analysis.monotone import delta_exact, epsilon_bruteforce
from src.core.errors import CapExceededError, ContractViolationError, SpecParseError
from src.ising.curie_weiss import (
    EPSILON_FLOOR,
    beta_grid,
    counterexample_delta,
    counterexample_epsilon,
    counterexample_report,
    counterexample_set,
    cw_measure,
    ising_report,
    transport_verify,
)


def test_counterexample_set_is_the_lower_half():
    A = counterexample_set(4)
    assert A.size == 11
    assert A.name == "lower-half(4)"


def test_odd_dimensions_are_rejected():
    with pytest.raises(ContractViolationError):
        counterexample_set(5)
    with pytest.raises(ContractViolationError):
        cw_measure(3, 1.0)


def test_delta_at_infinite_temperature():
    assert counterexample_delta(4, 0.0) == pytest.approx(3 / 16, abs=1e-12)


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 2.0, 3.0])
def test_closed_form_delta_matches_the_generic_count(beta):
    generic = delta_exact(counterexample_set(4), cw_measure(4, beta)).delta
    assert float(generic) == pytest.approx(counterexample_delta(4, beta), abs=1e-12)


@pytest.mark.parametrize("beta", [0.0, 1.0, 3.0])
def test_mincut_epsilon_matches_brute_force(beta):
    eps, witness = counterexample_epsilon(4, beta)
    brute = epsilon_bruteforce(counterexample_set(4), cw_measure(4, beta))
    assert eps == pytest.approx(float(brute.epsilon), abs=1e-9)
    assert eps >= EPSILON_FLOOR
    assert witness.n == 4


def test_delta_vanishes_while_epsilon_does_not():
    reports = [counterexample_report(8, beta) for beta in (0.0, 1.0, 2.0, 3.0)]
    deltas = [r.delta_A for r in reports]
    assert all(b < a for a, b in zip(deltas, deltas[1:]))
    assert all(r.passed for r in reports)
    assert reports[-1].ratio_n_delta_over_epsilon < reports[0].ratio_n_delta_over_epsilon


def test_transport_exhaustive():
    report = transport_verify(4, 0.0)
    assert report.monotone_sets == 168
    assert report.headline_holds
    assert report.min_symmetric_difference >= EPSILON_FLOOR
    # B = {|x| >= 2} puts more mass inside A than outside.
    assert report.transport_failures >= 1


def test_transport_cap():
    with pytest.raises(CapExceededError):
        transport_verify(6, 1.0)


def test_ising_report_sorts_temperatures():
    report = ising_report(4, [2.0, 0.0, 1.0], workers=1)
    assert [p.beta for p in report.points] == [0.0, 1.0, 2.0]
    assert report.delta_strictly_decreasing
    assert report.transport is not None and report.transport.beta == 2.0
    assert report.passed


def test_beta_grid():
    assert beta_grid("0:4:0.5") == [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
    assert beta_grid("3") == [3.0]
    for text in ("0:1", "1:0:0.5", "0:1:0", "a:b:c"):
        with pytest.raises(SpecParseError):
            beta_grid(text)


@pytest.mark.slow
def test_counterexample_at_n12():
    report = ising_report(12, [0.0, 1.0, 2.0, 3.0], workers=1)
    assert report.passed
    assert report.points[-1].delta_A < report.points[-1].mu_mid
    assert min(p.epsilon_A for p in report.points) >= EPSILON_FLOOR - 1e-9
    assert np.isfinite([p.ratio_n_delta_over_epsilon for p in report.points]).all()


def test_level_distribution_is_normalised_and_symmetric():
    mu = cw_measure(12, 2.5)
    assert mu.level_prob.sum() == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(mu.level_prob, mu.level_prob[::-1], atol=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0, 3.0])
def test_counterexample_at_n14(beta):
    report = counterexample_report(14, beta)
    assert report.epsilon_A >= EPSILON_FLOOR - 1e-9
    assert report.passed
