from fractions import Fraction as F

import pytest

from stoqdyn.dynamics import MatrixFamily, is_decomposable, is_divisible, is_linear
from stoqdyn.errors import BadConfig, DimensionMismatch
from stoqdyn.fixtures import coin_dynamics, constant_coins, flip_family, nondivisible_family, rotation_family_exact, two_ancilla_system
from stoqdyn.implementation import (
    family_dynamics,
    is_transition_constant,
    markov_product_family,
    transition_constant_family,
)
from stoqdyn.measure import TrajectoryMeasure, conditional, dirac, is_markovian, marginal_vector, mix
from stoqdyn.simplex import identity, mat_vec, vertex
from stoqdyn.statistical import (
    DeterministicSystem,
    JointInitial,
    StochasticSystem,
    SystemAncilla,
    ancilla_family_independent,
    ancilla_matrix_family,
    ancilla_process,
    derive_stochastic_from_ancilla,
    deterministic_family,
    deterministic_matrix_family,
    deterministic_member,
    dirac_process,
    is_decomposable_deterministic,
    realize_family_as_ancilla,
    realize_linear_as_stochastic,
    realize_stochastic_as_ancilla,
    reconstruct_family,
    stochastic_family,
    stochastic_matrix_family,
    stochastic_member,
)

import helpers

H = F(1, 2)
MERGE_SPLIT = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 1], [1, 2]])


def test_deterministic_validation():
    with pytest.raises(BadConfig):
        DeterministicSystem.from_rows((0, 1), [[2, 1], [1, 2]])
    with pytest.raises(BadConfig):
        DeterministicSystem.from_rows((0, 1), [[1, 2], [1, 3]])


def test_dirac_process_examples():
    const = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 2], [1, 2]])
    assert dirac_process(const, 1).support() == {(1, 1, 1): 1}
    assert dirac_process(constant_coins(), 2).support() == {(2, 2, 2): 1}
    D = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [2, 1], [1, 2]])
    assert dirac_process(D, 1).support() == {(1, 2, 1): 1}


def test_deterministic_member_examples():
    mu = deterministic_member(constant_coins(), (H, H))
    assert all(marginal_vector(mu, t) == (H, H) for t in mu.grid)
    assert deterministic_member(MERGE_SPLIT, (0, 1)) == dirac_process(MERGE_SPLIT, 2)
    assert marginal_vector(deterministic_member(MERGE_SPLIT, (H, H)), 1) == (1, 0)


def test_is_decomposable_deterministic_examples():
    assert is_decomposable_deterministic(constant_coins())
    v = is_decomposable_deterministic(MERGE_SPLIT)
    assert not v
    assert (v.witness["t"], v.witness["t_prime"], v.witness["i"], v.witness["j"]) == (2, 1, 1, 2)
    perm = DeterministicSystem.from_rows((0, 1, 2), [[1, 2, 3], [3, 1, 2], [2, 3, 1]])
    assert is_decomposable_deterministic(perm)


def test_ancilla_process_examples():
    SA, lam = two_ancilla_system()
    mu = ancilla_process(SA, JointInitial.independent((H, H), lam))
    S = derive_stochastic_from_ancilla(SA, lam)
    assert mu == mix((H, H), S.processes)
    assert mu[(1, 1, 1)] == F(1, 4)
    single = SystemAncilla((0, 1, 2), 2, 1, {(t, i, 1): MERGE_SPLIT(t, i) for t in (0, 1, 2) for i in (1, 2)})
    assert ancilla_process(single, JointInitial.independent((H, H), (1,))) == deterministic_member(MERGE_SPLIT, (H, H))
    two = SystemAncilla((0, 1), 2, 2, {(0, 1, 1): 1, (0, 1, 2): 1, (0, 2, 1): 2, (0, 2, 2): 2,
                                       (1, 1, 1): 1, (1, 1, 2): 2, (1, 2, 1): 2, (1, 2, 2): 1})
    pi = JointInitial(2, 2, (0, 1, 0, 0))
    assert ancilla_process(two, pi) == dirac((0, 1), 2, (1, 2))
    with pytest.raises(DimensionMismatch):
        ancilla_process(two, JointInitial(1, 2, (H, H)))


def test_ancilla_matrix_family_examples():
    SA, lam = two_ancilla_system()
    assert ancilla_matrix_family(SA, lam) == nondivisible_family()
    pinned = ancilla_family_independent(SA, (1, 0))
    assert dict(pinned.members) == dict(deterministic_family(SA.pinned(1)).members)
    assert is_transition_constant(ancilla_family_independent(SA, lam))


def test_stochastic_member_examples():
    SA, lam = two_ancilla_system()
    S = derive_stochastic_from_ancilla(SA, lam)
    mu = stochastic_member(S, (H, H))
    assert conditional(mu, [(2, 1)], [(1, 1), (0, 1)]) == H
    assert conditional(mu, [(2, 1)], [(1, 1), (0, 2)]) == 1
    diracs = StochasticSystem(MERGE_SPLIT.grid, 2, tuple(dirac_process(MERGE_SPLIT, i) for i in (1, 2)))
    assert dict(stochastic_family(diracs).members) == dict(deterministic_family(MERGE_SPLIT).members)
    assert stochastic_member(S, (0, 1)) == S.processes[1]


def test_family_as_ancilla_examples():
    fam = transition_constant_family(flip_family())
    SA, initials = realize_family_as_ancilla(fam)
    assert SA.m == 2
    assert reconstruct_family(SA, initials) == dict(fam.members)
    det = deterministic_family(MERGE_SPLIT)
    SA, initials = realize_family_as_ancilla(det)
    assert all(sum(1 for x in pi.entries if x) == 1 for p, pi in initials.items() if p in ((1, 0), (0, 1)))
    coin = markov_product_family(coin_dynamics())
    SA, initials = realize_family_as_ancilla(coin)
    assert SA.m == 4
    assert reconstruct_family(SA, initials) == dict(coin.members)


def test_stochastic_as_ancilla_examples():
    branching = StochasticSystem((0, 1), 2, (
        TrajectoryMeasure((0, 1), 2, {(1, 1): H, (1, 2): H}),
        dirac((0, 1), 2, (2, 2)),
    ))
    SA, lam = realize_stochastic_as_ancilla(branching)
    assert SA.m == 4
    assert lam == (0, H, 0, H)
    assert derive_stochastic_from_ancilla(SA, lam).processes == branching.processes
    det = StochasticSystem((0, 1), 2, (dirac((0, 1), 2, (1, 2)), dirac((0, 1), 2, (2, 2))))
    SA, lam = realize_stochastic_as_ancilla(det)
    assert sorted(lam) == [0, 0, 0, 1]
    SA, lam = realize_stochastic_as_ancilla(derive_stochastic_from_ancilla(*two_ancilla_system()))
    assert SA.m == 16
    S = derive_stochastic_from_ancilla(*two_ancilla_system())
    for i in (1, 2):
        assert derive_stochastic_from_ancilla(SA, lam).processes[i - 1] == S.processes[i - 1]


def test_linear_as_stochastic_examples():
    fam = nondivisible_family()
    S = realize_linear_as_stochastic(fam)
    assert stochastic_matrix_family(S) == fam
    assert all(is_markovian(mu) for mu in S.processes)
    ident = realize_linear_as_stochastic(MatrixFamily((0, 1, 2), (identity(2),) * 3))
    assert ident.processes[0].support() == {(1, 1, 1): 1}
    rot = rotation_family_exact()
    S = realize_linear_as_stochastic(rot)
    assert stochastic_matrix_family(S) == rot


# properties ----------------------------------------------------------------

def test_deterministic_three_way_equivalence(rng):
    for _ in range(40):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        D = helpers.deterministic_system(rng, n, tau)
        fam = deterministic_family(D, max_denominator=3)
        a = bool(is_decomposable_deterministic(D))
        b = all(is_markovian(mu) for mu in fam.members.values())
        P = deterministic_matrix_family(D)
        c = bool(is_decomposable(P))
        assert a == b == c
        assert c == bool(is_divisible(P))


def test_ancilla_and_stochastic_routes_agree(rng):
    for _ in range(25):
        n, tau, m = int(rng.integers(1, 3)), int(rng.integers(1, 3)), int(rng.integers(1, 4))
        grid = tuple(range(tau + 1))
        table = {(t, i, a): (i if t == 0 else int(rng.integers(1, n + 1)))
                 for t in grid for i in range(1, n + 1) for a in range(1, m + 1)}
        SA = SystemAncilla(grid, n, m, table)
        lam = helpers.prob_vector(rng, m, 4)
        fa = ancilla_family_independent(SA, lam, max_denominator=3)
        S = derive_stochastic_from_ancilla(SA, lam)
        fs = stochastic_family(S, max_denominator=3)
        assert dict(fa.members) == dict(fs.members)
        assert is_linear(family_dynamics(fa), max_denominator=3).data == ancilla_matrix_family(SA, lam)
        assert is_linear(family_dynamics(fs), max_denominator=3).data == stochastic_matrix_family(S)


def test_realization_round_trips(rng):
    for _ in range(20):
        fam = helpers.matrix_family(rng, 2, int(rng.integers(1, 3)))
        S = realize_linear_as_stochastic(fam)
        assert stochastic_matrix_family(S) == fam
        SA, lam = realize_stochastic_as_ancilla(S)
        assert derive_stochastic_from_ancilla(SA, lam).processes == S.processes
        pf = stochastic_family(S, max_denominator=3)
        SA2, initials = realize_family_as_ancilla(pf)
        assert reconstruct_family(SA2, initials) == dict(pf.members)
        for p0 in pf.members:
            assert mat_vec(fam.at(fam.grid[-1]), p0) == marginal_vector(pf.members[p0], fam.grid[-1])
        assert vertex(2, 1) in pf.members
