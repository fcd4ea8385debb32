from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from stoqdyn.errors import CapExceeded, GridNotDifferenceClosed, InvalidEvent, InvalidMeasure, InvalidTime, NotMarkovian
from stoqdyn.fixtures import coin_dynamics, two_ancilla_system
from stoqdyn.implementation import markov_implementation, non_markov_implementation, solution
from stoqdyn.measure import (
    TrajectoryMeasure,
    check_chapman_kolmogorov,
    conditional,
    dirac,
    is_markovian,
    is_non_degenerate,
    is_time_homogeneous,
    joint_probability,
    law_of_total_probability,
    marginal_vector,
    mix,
    transition_matrix,
)
from stoqdyn.scalar import UNDEFINED
from stoqdyn.simplex import mat_vec
from stoqdyn.statistical import JointInitial, ancilla_process

import helpers
from oracles import event_prob, marginal_oracle, markov_oracle, measure_array

H = F(1, 2)


def coin_member():
    return markov_implementation(solution(coin_dynamics(), (H, H)), (0, 1, 2))


def sec54_member(p0=(H, H)):
    SA, lam = two_ancilla_system()
    return ancilla_process(SA, JointInitial.independent(p0, lam))


def test_measure_validation():
    with pytest.raises(InvalidMeasure):
        TrajectoryMeasure((0, 1), 2, {(1, 1): H})
    with pytest.raises(InvalidMeasure):
        TrajectoryMeasure((0, 1), 2, {(1, 3): 1})
    with pytest.raises(InvalidTime):
        TrajectoryMeasure((1, 2), 2, {(1, 1): 1})
    with pytest.raises(CapExceeded):
        TrajectoryMeasure((0,), 9, {(1,): 1})


def test_joint_probability_examples():
    mu = coin_member()
    assert joint_probability(mu, [(0, 1), (1, 1), (2, 1)]) == F(1, 16)
    assert joint_probability(mu, []) == 1
    assert joint_probability(mu, [(1, 1), (1, 2)]) == 0
    assert joint_probability(sec54_member((1, 0)), [(0, 1), (1, 1), (2, 1)]) == H
    with pytest.raises(InvalidEvent):
        joint_probability(mu, [(5, 1)])


def test_marginal_vector_examples():
    assert marginal_vector(coin_member(), 1) == (F(1, 4), F(3, 4))
    assert marginal_vector(dirac((0, 1, 2), 3, (2, 3, 1)), 1) == (0, 0, 1)
    prod = markov_implementation([(H, H), (F(1, 3), F(2, 3))])
    assert marginal_vector(prod, 1) == (F(1, 3), F(2, 3))


def test_conditional_examples():
    mu = sec54_member()
    assert conditional(mu, [(2, 1)], [(1, 1), (0, 1)]) == H
    assert conditional(mu, [(2, 1)], [(1, 1), (0, 2)]) == 1
    d = dirac((0, 1), 2, (1, 2))
    assert conditional(d, [(1, 1)], [(0, 2)]) is UNDEFINED


def test_transition_matrix_examples():
    from stoqdyn.fixtures import flip_family
    from stoqdyn.implementation import markov_product_family

    member = markov_product_family(flip_family()).member((F(1, 3), F(2, 3)))
    assert transition_matrix(member, 1, 0) == ((F(2, 3), F(2, 3)), (F(1, 3), F(1, 3)))
    d = dirac((0, 1, 2), 2, (1, 2, 1))
    assert transition_matrix(d, 1, 0) == ((0, UNDEFINED), (1, UNDEFINED))
    prod = markov_implementation([(H, H), (F(1, 3), F(2, 3)), (F(1, 6), F(5, 6))])
    m = transition_matrix(prod, 2, 1)
    assert m == ((F(1, 6), F(1, 6)), (F(5, 6), F(5, 6)))


def test_is_markovian_examples():
    assert is_markovian(markov_implementation([(H, H), (F(1, 4), F(3, 4)), (H, H)]))
    v = is_markovian(sec54_member())
    assert not v
    assert v.witness["times"] == [0, 1, 2]
    assert v.witness["with_history"] != v.witness["without_history"]
    assert is_markovian(dirac((0, 1, 2, 3), 3, (1, 3, 2, 2)))


def test_is_time_homogeneous_examples():
    assert is_time_homogeneous(dirac((0, 1, 2), 2, (1, 1, 1)))
    prod = markov_implementation([(H, H), (F(1, 3), F(2, 3)), (F(1, 4), F(3, 4))])
    assert not is_time_homogeneous(prod)
    # 1 -> 2 -> 1 is a sample path of the swap chain, so no defined entries disagree
    assert is_time_homogeneous(dirac((0, 1, 2), 2, (1, 2, 1)))
    with pytest.raises(NotMarkovian):
        is_time_homogeneous(sec54_member())
    with pytest.raises(GridNotDifferenceClosed):
        is_time_homogeneous(dirac((0, 1, 3), 2, (1, 1, 1)))


def test_chapman_kolmogorov_examples():
    assert not check_chapman_kolmogorov(sec54_member(), 2, 1)
    assert check_chapman_kolmogorov(sec54_member(), 2, 2)
    assert check_chapman_kolmogorov(coin_member(), 2, 1)


def test_non_degeneracy_examples():
    assert is_non_degenerate(solution(coin_dynamics(), (H, H)))
    assert not is_non_degenerate([(1, 0), (0, 1), (1, 0)])
    assert not is_non_degenerate([(H, H), (1, 0)])


# oracle comparisons on random instances -------------------------------------

def random_measure(rng, n, tau):
    # random mixture of a product measure, a non-Markov one and Diracs
    traj = helpers.trajectory(rng, n, tau)
    parts = [markov_implementation(traj)]
    if is_non_degenerate(traj):
        parts.append(non_markov_implementation(traj))
    parts.append(dirac(tuple(range(tau + 1)), n, tuple(int(x) for x in rng.integers(1, n + 1, tau + 1))))
    w = helpers.prob_vector(rng, len(parts), 4)
    return mix(w, parts)


def test_marginals_and_events_match_oracle(rng):
    for _ in range(40):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(0, 4))
        mu = random_measure(rng, n, tau)
        arr = measure_array(mu)
        for k, t in enumerate(mu.grid):
            assert marginal_vector(mu, t) == marginal_oracle(arr, k)
        for cfg in product(range(1, n + 1), repeat=min(2, tau + 1)):
            ev = list(zip(mu.grid, cfg))
            assert joint_probability(mu, ev) == event_prob(arr, list(zip(range(len(cfg)), cfg)))


def test_markov_verdict_matches_oracle_with_repeated_times(rng):
    for _ in range(40):
        n, tau = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        if n == 3 and tau == 3:
            tau = 2
        mu = random_measure(rng, n, tau)
        assert bool(is_markovian(mu)) == markov_oracle(measure_array(mu))


def test_law_of_total_probability_and_two_step(rng):
    for _ in range(40):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        mu = random_measure(rng, n, tau)
        p0 = marginal_vector(mu, 0)
        for t in mu.grid:
            assert law_of_total_probability(mu, t)
            if all(x > 0 for x in p0):
                assert mat_vec(transition_matrix(mu, t, 0), p0) == marginal_vector(mu, t)
            for tp in mu.grid:
                if tp > t:
                    continue
                a, b = transition_matrix(mu, t, tp), transition_matrix(mu, tp, 0)
                flat = [x for row in a + b for x in row]
                if UNDEFINED not in flat and all(x > 0 for x in p0):
                    assert mat_vec(a, mat_vec(b, p0)) == marginal_vector(mu, t) or not is_markovian(mu)


def test_markov_implies_chapman_kolmogorov(rng):
    for _ in range(60):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        mu = markov_implementation(helpers.trajectory(rng, n, tau))
        for t in mu.grid:
            for tp in mu.grid:
                if tp <= t:
                    assert check_chapman_kolmogorov(mu, t, tp)


def test_zero_one_conditionals_are_stable(rng):
    for _ in range(40):
        n, tau = int(rng.integers(2, 4)), int(rng.integers(1, 3))
        mu = random_measure(rng, n, tau)
        for t, tp, tq in product(mu.grid, repeat=3):
            for i, j, k in product(range(1, n + 1), repeat=3):
                c = conditional(mu, [(t, i)], [(tp, j)])
                if c is UNDEFINED or c not in (0, 1):
                    continue
                finer = conditional(mu, [(t, i)], [(tp, j), (tq, k)])
                assert finer is UNDEFINED or finer == c


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_transition_columns_are_conditionals(n, tau, s):
    import numpy as np

    mu = random_measure(np.random.default_rng(s), n, tau)
    for t in mu.grid:
        m = transition_matrix(mu, t, 0)
        for j in range(n):
            col = [m[i][j] for i in range(n)]
            if UNDEFINED not in col:
                assert sum(col) == 1
