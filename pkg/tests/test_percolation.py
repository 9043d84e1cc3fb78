from fractions import Fraction

import numpy as np
import pytest

from src.core.errors import CapExceededError, DimensionMismatchError, SpecParseError
from src.core.sets import ExplicitSet, OracleSet, is_monotone
from src.core.states import BitState
from src.percolation.lattice import (
    HexLattice,
    crossing_count,
    crossing_probability,
    crossing_run,
    crossing_set,
    duality_mismatches,
    has_crossing,
    has_dual_crossing,
    monotonicity_spot_check,
    parse_config,
    percolation_report,
    render_config,
    sample_crossing,
    sampler_agreement,
    seed_crossing,
)


def configuration(rows):
    return parse_config("\n".join(rows))


def test_neighbours_of_a_site():
    lat = HexLattice(3)
    assert sorted(lat.neighbours(1, 1)) == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]
    assert sorted(lat.neighbours(0, 0)) == [(0, 1), (1, 0)]


def test_grid_and_word_are_inverse():
    lat = HexLattice(4)
    word = 0b1011_0110_0001_1100
    assert lat.word(lat.grid(word)) == word
    np.testing.assert_array_equal(lat.grids(np.array([word], dtype=np.uint64))[0], lat.grid(word))


def test_only_one_diagonal_is_connected():
    c, lat = configuration(["001", "010", "100"])
    assert has_crossing(c, lat)
    c, lat = configuration(["100", "010", "001"])
    assert not has_crossing(c, lat)


def test_blocked_rows_do_not_cross():
    c, lat = configuration(["110", "000", "011"])
    assert not has_crossing(c, lat)
    assert has_dual_crossing(c, lat)


def test_extreme_configurations():
    lat = HexLattice(5)
    assert has_crossing(BitState((1 << 25) - 1, 25), lat)
    assert not has_crossing(BitState(0, 25), lat)
    assert has_crossing(seed_crossing(lat), lat)
    assert seed_crossing(lat).weight == 5


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        has_crossing(BitState(0, 4), HexLattice(3))


def test_small_crossing_sets():
    assert crossing_set(HexLattice(1)).to_strings() == ["1"]
    A = crossing_set(HexLattice(2))
    assert isinstance(A, ExplicitSet)
    assert is_monotone(A)
    assert A.size == 8
    brute = sum(has_crossing(BitState(w, 4), HexLattice(2)) for w in range(16))
    assert A.size == brute


def test_large_crossing_sets_are_oracles():
    A = crossing_set(HexLattice(5))
    assert isinstance(A, OracleSet)
    assert A.contains(seed_crossing(HexLattice(5)).bits)
    with pytest.raises(CapExceededError):
        crossing_set(HexLattice(5), explicit=True)


@pytest.mark.parametrize("L", [1, 2, 3, 4])
def test_exact_crossing_probability_is_half(L):
    prob = crossing_probability(HexLattice(L), "exact")
    assert prob.value.to_fraction() == Fraction(1, 2)
    assert prob.deviation_from_half == 0
    assert crossing_count(HexLattice(L)) == 1 << (L * L - 1)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_exactly_one_of_primal_and_dual_crossing(L):
    assert duality_mismatches(HexLattice(L)) == 0


def test_exact_enumeration_cap():
    with pytest.raises(CapExceededError):
        crossing_count(HexLattice(5))


def test_monte_carlo_crossing_probability():
    prob = crossing_probability(HexLattice(8), "mc", samples=20_000, seed=3)
    assert abs(prob.deviation_from_half) <= 4 * np.sqrt(0.25 / 20_000)
    assert prob.samples == 20_000


def test_unknown_probability_mode():
    with pytest.raises(ValueError):
        crossing_probability(HexLattice(2), "approx")


def test_opening_sites_never_breaks_a_crossing():
    assert monotonicity_spot_check(HexLattice(6), trials=2000, seed=4) == 0


def test_censored_run_stays_on_the_event():
    lat = HexLattice(5)
    traj = crossing_run(lat, steps=3000, seed=2, thin=10)
    assert all(has_crossing(BitState(x, lat.sites), lat) for x in traj.states)
    assert traj.accepted + traj.censored + traj.holds == 3000


def test_zero_steps_returns_the_seed():
    lat = HexLattice(4)
    assert sample_crossing(lat, 0, seed=1) == seed_crossing(lat)


def test_config_text():
    lat = HexLattice(3)
    text = render_config(seed_crossing(lat), lat)
    assert text == "111\n000\n000\n"
    c, parsed = parse_config(text)
    assert parsed == lat and c == seed_crossing(lat)
    with pytest.raises(SpecParseError):
        parse_config("10\n1\n")
    with pytest.raises(SpecParseError):
        parse_config("")


def test_percolation_report_with_exact_probability():
    final, report = percolation_report(3, steps=500, seed=1, mode="exact")
    assert report.final_crossing
    assert report.open_sites == final.weight
    assert report.crossing_probability.value.to_fraction() == Fraction(1, 2)
    assert report.passed


@pytest.mark.slow
def test_chain_and_rejection_sampler_agree():
    agreement = sampler_agreement(2, steps=400_000, thin=20, seed=0)
    assert agreement["states"] == 8
    assert agreement["chain_tv"] < 0.02
    assert agreement["max_sigma"] <= 4
    assert agreement["mean_tries"] == pytest.approx(2.0, abs=0.1)


@pytest.mark.slow
def test_large_board():
    _, report = percolation_report(32, steps=1_000_000, seed=7, mode="mc", samples=100_000)
    assert report.final_crossing
    assert report.passed


def test_seed_crosses_on_large_boards():
    lat = HexLattice(64)
    assert seed_crossing(lat) in crossing_set(lat)
