from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from stoqdyn.dynamics import (
    DIVISIBLE,
    NOT_DIVISIBLE,
    MatrixFamily,
    NoMatrixForm,
    ProbabilityDynamics,
    TabulatedMap,
    decomposing_map_matrix,
    evaluate,
    is_decomposable,
    is_divisible,
    is_linear,
    is_time_homogeneous_dynamics,
    matrix_power_family,
    stochastic_factor,
    verify_certificate,
)
from stoqdyn.errors import GridNotDifferenceClosed, InvalidDynamics, InvalidTime, NotDecomposable
from stoqdyn.fixtures import FLIP, coin_dynamics, nondivisible_family, rotation_family_exact
from stoqdyn.simplex import identity, mat_mul, mat_vec, rational_grid, validate_stochastic_matrix
from stoqdyn.statistical import DeterministicSystem, deterministic_matrix_family

import helpers
from oracles import decomposable_oracle, divisible_oracle
from strategies import stochastic_matrices

H = F(1, 2)


def test_family_requires_identity_at_zero():
    with pytest.raises(InvalidDynamics):
        MatrixFamily((0, 1), (FLIP, FLIP))


def test_evaluate_examples():
    assert evaluate(coin_dynamics(), 1, (H, H)) == (F(1, 4), F(3, 4))
    assert evaluate(coin_dynamics(), 0, (F(1, 3), F(2, 3))) == (F(1, 3), F(2, 3))
    assert evaluate(nondivisible_family(), 1, (0, 1)) == (H, H)
    with pytest.raises(InvalidTime):
        evaluate(nondivisible_family(), 7, (0, 1))


def test_is_linear_examples():
    assert is_linear(coin_dynamics(lambda r: r))
    v = is_linear(coin_dynamics())
    assert not v
    w = v.witness
    assert w["t"] == 1 and w["value"] == (F(1, 4), F(3, 4)) and w["mixture"] == (H, H)
    assert w["lambda"] == H and {w["p"], w["q"]} == {(1, 0), (0, 1)}
    assert is_linear(nondivisible_family()).data == nondivisible_family()


def test_tabulated_dynamics_linearity():
    fam = nondivisible_family()
    pts = {p: tuple(mat_vec(m, p) for m in fam.matrices) for p in rational_grid(2, 3)}
    tab = ProbabilityDynamics.wrap(TabulatedMap(fam.grid, 2, pts))
    assert is_linear(tab)
    assert is_decomposable(tab)


def test_is_decomposable_examples():
    assert is_decomposable(nondivisible_family())
    # trajectories from 1 and 2 merge at t=1 and split at t=2
    D = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 1], [1, 2]])
    v = is_decomposable(deterministic_matrix_family(D))
    assert not v and (v.witness["t"], v.witness["t_prime"]) == (2, 1)
    const = MatrixFamily((0, 1, 2), (identity(2),) * 3)
    assert is_decomposable(const)
    # the grid test on the black-box form gives the same verdict
    assert not is_decomposable(ProbabilityDynamics.from_function((0, 1, 2), 2, lambda t, p: evaluate(deterministic_matrix_family(D), t, p)))


def test_decomposing_map_examples():
    assert decomposing_map_matrix(nondivisible_family(), 2, 1) == ((H, F(3, 2)), (H, -H))
    assert decomposing_map_matrix(rotation_family_exact(), 2, 1) == ((0, 1), (1, 0))
    assert decomposing_map_matrix(nondivisible_family(), 1, 1) == identity(2)
    with pytest.raises(InvalidTime):
        decomposing_map_matrix(nondivisible_family(), 1, 2)
    D = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 1], [2, 2]])
    assert isinstance(decomposing_map_matrix(deterministic_matrix_family(D), 2, 1), NoMatrixForm)
    D = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 1], [1, 2]])
    with pytest.raises(NotDecomposable):
        decomposing_map_matrix(deterministic_matrix_family(D), 2, 1)


def test_is_divisible_examples():
    rep = is_divisible(nondivisible_family())
    assert not rep and rep.failing_pairs() == [(1, 2)]
    pair = rep.pairs[(1, 2)]
    assert pair.status == NOT_DIVISIBLE
    fam = nondivisible_family()
    assert verify_certificate(fam.at(1), fam.at(2), pair.certificate)
    rot = is_divisible(rotation_family_exact())
    assert rot and rot.pairs[(1, 2)].factor == ((0, 1), (1, 0))
    m = ((F(2, 3), F(1, 4)), (F(1, 3), F(3, 4)))
    assert is_divisible(matrix_power_family(m, 4))


def test_time_homogeneity_examples():
    m = ((F(2, 3), F(1, 4)), (F(1, 3), F(3, 4)))
    assert is_time_homogeneous_dynamics(matrix_power_family(m, 3))
    assert not is_time_homogeneous_dynamics(nondivisible_family())
    assert not is_time_homogeneous_dynamics(coin_dynamics())
    with pytest.raises(GridNotDifferenceClosed):
        is_time_homogeneous_dynamics(MatrixFamily((0, 1, 3), (identity(2),) * 3))


# properties ----------------------------------------------------------------

def test_divisible_implies_decomposable(rng):
    for _ in range(150):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        fam = helpers.matrix_family(rng, n, tau)
        if is_divisible(fam):
            assert is_decomposable(fam)


def test_kernel_test_matches_grid_oracle(rng):
    for _ in range(150):
        n, tau = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        fam = helpers.matrix_family(rng, n, tau)
        assert bool(is_decomposable(fam)) == decomposable_oracle(fam.matrices)


def test_factor_and_certificate_soundness(rng):
    for _ in range(150):
        n = int(rng.integers(1, 4))
        a = helpers.stochastic_matrix(rng, n)
        b = mat_mul(helpers.stochastic_matrix(rng, n), a) if rng.random() < 0.4 else helpers.stochastic_matrix(rng, n)
        pair = stochastic_factor(a, b)
        if pair.status == DIVISIBLE:
            validate_stochastic_matrix(pair.factor)
            assert mat_mul(pair.factor, a) == b
        else:
            assert verify_certificate(a, b, pair.certificate)
        assert (pair.status == DIVISIBLE) == divisible_oracle(a, b)


def _coordinates(basis, x):
    """Exact coordinates of ``x`` in the span of ``basis`` (assumed independent)."""
    from stoqdyn.simplex import rref

    aug = [[b[i] for b in basis] + [x[i]] for i in range(len(x))]
    red, piv = rref(aug)
    assert len(basis) not in piv, "point outside the range"
    return [red[r][-1] for r in range(len(basis))]


def test_decomposing_maps_are_unique_and_convex(rng):
    for _ in range(60):
        n, tau = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        fam = helpers.matrix_family(rng, n, tau)
        v1, v2 = is_decomposable(fam), is_decomposable(fam)
        assert v1.data == v2.data
        if not v1:
            continue
        for (tp, t), data in v1.data.items():
            basis, images = data["range_basis"], data["images"]

            def apply(x):
                c = _coordinates(basis, x)
                return tuple(sum((ck * img[i] for ck, img in zip(c, images)), F(0)) for i in range(n))

            p = helpers.prob_vector(rng, n, 4)
            q = helpers.prob_vector(rng, n, 4)
            lam = F(int(rng.integers(0, 5)), 4)
            x, y = mat_vec(fam.at(tp), p), mat_vec(fam.at(tp), q)
            assert apply(x) == mat_vec(fam.at(t), p)
            mixed = tuple(lam * a + (1 - lam) * b for a, b in zip(x, y))
            assert apply(mixed) == tuple(lam * a + (1 - lam) * b for a, b in zip(apply(x), apply(y)))


@settings(max_examples=60, deadline=None)
@given(stochastic_matrices(), st.integers(1, 4))
def test_powers_are_divisible(m, tau):
    fam = matrix_power_family(m, tau)
    assert is_divisible(fam)
    assert is_time_homogeneous_dynamics(fam)
