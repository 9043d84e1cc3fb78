import math

import numpy as np
import pytest

from src.catalog.specs import build
from src.chain.dynamics import (
    ChainConfig,
    empirical_distribution,
    empirical_transitions,
    empirical_tv,
    rejection_sample,
    rejection_samples,
    run,
    run_replicas,
    step,
)
from src.chain.rng import ProposalStream, make_rng
from src.core.errors import ContractViolationError, SamplingExhaustedError
from src.core.sets import ExplicitSet, OracleSet
from src.core.states import BitState
from src.spectral.kernel import build_kernel


def test_proposals_are_reproducible():
    a, b = ProposalStream(5, seed=9), ProposalStream(5, seed=9)
    draws = [a.draw() for _ in range(1000)]
    assert draws == [b.draw() for _ in range(1000)]
    assert all(0 <= i < 5 and b_ in (0, 1) for i, b_ in draws)
    assert draws != [ProposalStream(5, seed=9, replica=1).draw() for _ in range(1000)]


def test_proposals_survive_refills():
    a, b = ProposalStream(3, seed=2, block=7), ProposalStream(3, seed=2, block=7)
    assert [a.draw() for _ in range(50)] == [b.draw() for _ in range(50)]


def test_step_never_leaves_the_set(coord0_one):
    stream = ProposalStream(2, seed=4)
    x = BitState.from_string("10")
    for _ in range(200):
        x = step(x, coord0_one, stream)
        assert x in coord0_one


def test_step_rejects_a_start_outside(coord0_one):
    with pytest.raises(ContractViolationError):
        step(0, coord0_one, ProposalStream(2, seed=0))


def test_run_is_deterministic_and_counts_every_step():
    A = build("threshold(5,2)")
    cfg = ChainConfig(A=A, x0=(1 << 5) - 1, steps=5000, seed=17, thin=5)
    first, second = run(cfg), run(cfg)
    assert first == second
    assert first.accepted + first.censored + first.holds == 5000
    assert len(first.states) == 1000
    assert all(A.contains(x) for x in first.states)


def test_monotone_fast_path_gives_the_same_chain():
    A = build("threshold(6,3)")
    plain = run(ChainConfig(A=A, x0=(1 << 6) - 1, steps=3000, seed=3))
    fast = run(ChainConfig(A=A, x0=(1 << 6) - 1, steps=3000, seed=3, monotone=True))
    assert plain.states == fast.states


def test_monotone_fast_path_refuses_a_set_that_is_not_up_closed(coord0_zero):
    with pytest.raises(ContractViolationError):
        ChainConfig(A=coord0_zero, x0=0, steps=200, seed=1, monotone=True)
    traj = run(ChainConfig(A=coord0_zero, x0=0, steps=200, seed=1))
    assert all(coord0_zero.contains(x) for x in traj.states)


def test_run_requires_x0_in_the_set(coord0_one):
    with pytest.raises(ContractViolationError):
        run(ChainConfig(A=coord0_one, x0=0, steps=10, seed=0))


def test_replicas_differ_but_are_reproducible():
    cfg = ChainConfig(A=build("threshold(6,2)"), x0=(1 << 6) - 1, steps=500, seed=1)
    first = run_replicas(cfg, 3, workers=1)
    assert first == run_replicas(cfg, 3, workers=1)
    assert first[0].states != first[1].states


def test_oracle_chain_in_high_dimension():
    n = 200
    A = OracleSet(n, lambda w: w.bit_count() >= n // 2, "majority")
    traj = run(ChainConfig(A=A, x0=(1 << n) - 1, steps=20_000, seed=8, thin=100, monotone=True))
    assert all(A.contains(x) for x in traj.states)


def test_marginals_of_the_full_cube():
    n, steps, thin = 3, 200_000, 10
    traj = run(ChainConfig(A=ExplicitSet.full(n), x0=0, steps=steps, seed=21, thin=thin))
    states = np.array(traj.states)
    tolerance = 4 * math.sqrt(0.25 / len(states))
    for i in range(n):
        assert abs(((states >> i) & 1).mean() - 0.5) <= tolerance


def test_empirical_transitions_follow_the_kernel(coord0_one):
    traj = run(ChainConfig(A=coord0_one, x0=1, steps=40_000, seed=6))
    counts = empirical_transitions(traj.states, coord0_one)
    freq = counts / counts.sum(axis=1, keepdims=True)
    K = build_kernel(coord0_one)
    np.testing.assert_allclose(freq, K.P, atol=0.02)


def test_rejection_sampling_costs_one_over_probability():
    A = build("dictator(4,0)")
    draws = rejection_samples(A, 2000, seed=12)
    assert all(A.contains(d.state) for d in draws)
    mean = np.mean([d.tries for d in draws])
    assert abs(mean - 2.0) <= 4 * math.sqrt(2.0 / 2000)


def test_rejection_sampling_gives_up():
    A = OracleSet(10, lambda w: False, "nothing")
    with pytest.raises(SamplingExhaustedError) as err:
        rejection_sample(A, make_rng(0), max_tries=50)
    assert err.value.tries == 50


def test_empirical_tv_extremes(coord0_one):
    assert empirical_tv([1, 3], coord0_one) == 0.0
    assert empirical_tv([1, 1, 1], coord0_one) == pytest.approx(0.5)
    with pytest.raises(ContractViolationError):
        empirical_distribution([0], coord0_one)
    with pytest.raises(ContractViolationError):
        empirical_tv([], ExplicitSet.full(2))


def test_thinning_past_the_end_leaves_nothing_to_tabulate(coord0_one):
    traj = run(ChainConfig(A=coord0_one, x0=3, steps=5, seed=0, thin=10))
    assert traj.states == []
    with pytest.raises(ContractViolationError):
        empirical_tv(traj.states, coord0_one)


@pytest.mark.slow
def test_chain_samples_uniformly():
    A = build("dictator(4,0)")
    traj = run(ChainConfig(A=A, x0=(1 << 4) - 1, steps=1_000_000, seed=5, thin=10, monotone=True))
    assert empirical_tv(traj.states, A) < 0.02


def test_singleton_chain_stays_put():
    A = ExplicitSet.from_strings(["11"])
    traj = run(ChainConfig(A=A, x0=3, steps=100, seed=0))
    assert set(traj.states) == {3}
    assert traj.accepted == 0


def test_zero_steps_returns_x0(coord0_one):
    traj = run(ChainConfig(A=coord0_one, x0=3, steps=0, seed=0))
    assert traj.final == 3 and traj.states == []


def test_rejection_from_the_full_cube_accepts_first_draw():
    assert all(d.tries == 1 for d in rejection_samples(ExplicitSet.full(3), 50, seed=0))
