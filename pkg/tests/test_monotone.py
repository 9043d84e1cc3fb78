from fractions import Fraction

import numpy as np
import pytest

from src.analysis.monotone import (
    check_gglrs,
    crosscheck_mincut,
    delta_exact,
    delta_sampled,
    epsilon,
    epsilon_bruteforce,
    epsilon_mincut,
    gglrs_sweep,
)
from src.catalog.specs import build
from src.chain.rng import make_rng
from src.core.errors import CapExceededError, RepresentationError
from src.core.measures import CurieWeiss, UniformCube, WeightTable
from src.core.sets import ExplicitSet, OracleSet, is_monotone
from src.core.states import popcounts


def test_delta_counts_upward_exits(coord0_zero):
    stats = delta_exact(coord0_zero)
    assert stats.violating_pairs == 2
    assert stats.delta.to_fraction() == Fraction(1, 4)


def test_single_point_cube():
    S = ExplicitSet.from_strings(["0"])
    assert delta_exact(S).delta.to_fraction() == Fraction(1, 2)
    assert epsilon(S).epsilon.to_fraction() == Fraction(1, 2)


def test_monotone_sets_have_no_violations(coord0_one):
    assert delta_exact(coord0_one).violating_pairs == 0
    assert epsilon(coord0_one).epsilon_count == 0


@pytest.mark.parametrize("method", ["bruteforce", "mincut"])
def test_epsilon_methods_agree_on_the_standard_example(coord0_zero, method):
    dist = epsilon(coord0_zero, method=method)
    assert dist.epsilon_count == 2
    assert dist.epsilon.to_fraction() == Fraction(1, 2)
    assert is_monotone(dist.witness)
    assert int((dist.witness.member ^ coord0_zero.member).sum()) == 2


def test_gglrs_holds_with_equality(coord0_zero):
    report = check_gglrs(coord0_zero)
    assert report.passed
    assert report.violating_pairs == report.epsilon_count == 2


def test_empty_and_full_sets_are_already_monotone():
    for S in (ExplicitSet.empty(3), ExplicitSet.full(3)):
        assert epsilon_mincut(S).epsilon_count == 0
        assert check_gglrs(S).passed


def test_unknown_epsilon_method(coord0_zero):
    with pytest.raises(ValueError):
        epsilon(coord0_zero, method="greedy")


def test_bruteforce_cap():
    with pytest.raises(CapExceededError):
        epsilon_bruteforce(build("threshold(5,2)"))


def test_oracle_sets_need_sampling():
    S = OracleSet(64, lambda w: w & 1 == 0, "x0-off")
    with pytest.raises(RepresentationError):
        delta_exact(S)
    sampled = delta_sampled(S, UniformCube(64), 20_000, make_rng(5))
    # δ = P(x_0 = 0, i = 0) = 1/(2n)
    assert abs(sampled.estimate - 1 / 128) <= 4 * np.sqrt((1 / 128) * (1 - 1 / 128) / 20_000)


def test_sampled_delta_matches_exact(coord0_zero):
    sampled = delta_sampled(coord0_zero, UniformCube(2), 20_000, make_rng(11), seed=11)
    assert abs(sampled.estimate - 0.25) <= 4 * np.sqrt(0.25 * 0.75 / 20_000)
    assert sampled.seed == 11


def test_weighted_epsilon_agrees_between_methods():
    rng = np.random.Generator(np.random.Philox(3))
    m = WeightTable(3, rng.random(8), normalize=True)
    S = ExplicitSet.from_strings(["000", "100", "011"])
    assert float(epsilon_mincut(S, m).epsilon) == pytest.approx(float(epsilon_bruteforce(S, m).epsilon), abs=1e-9)


def test_weighted_delta_uses_the_measure():
    mu = CurieWeiss(4, 1.0)
    A = ExplicitSet(4, popcounts(4) <= 2)
    # Only the middle level exits A, through its two zero coordinates.
    assert float(delta_exact(A, mu).delta) == pytest.approx(mu.level_mass(2) / 2, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gglrs_sweep_small(n):
    report = gglrs_sweep(n, workers=1)
    assert report.passed
    assert report.subsets == 1 << (1 << n)
    assert report.min_slack >= 0


@pytest.mark.slow
def test_gglrs_sweep_n4():
    report = gglrs_sweep(4, mincut_sample=200, workers=1)
    assert report.subsets == 65536
    assert report.monotone_sets == 168
    assert report.failures == 0
    assert report.mincut_mismatches == 0


def test_mincut_crosscheck_n2():
    checked, uniform_bad, weighted_bad = crosscheck_mincut(2, workers=1)
    assert checked == 16
    assert uniform_bad == weighted_bad == 0


@pytest.mark.slow
def test_mincut_crosscheck_n3():
    assert crosscheck_mincut(3, workers=1) == (256, 0, 0)


def test_zero_delta_exactly_on_monotone_sets():
    for mask in range(1 << 8):
        S = ExplicitSet.from_mask(3, mask)
        assert (delta_exact(S).violating_pairs == 0) == is_monotone(S)


def test_sampled_delta_of_a_monotone_oracle():
    S = OracleSet(50, lambda w: w.bit_count() >= 25, "majority")
    assert delta_sampled(S, UniformCube(50), 2000, make_rng(1)).violations == 0


def test_sampled_delta_needs_the_uniform_measure(coord0_zero):
    with pytest.raises(RepresentationError):
        delta_sampled(coord0_zero, CurieWeiss(2, 1.0), 100, make_rng(0))
