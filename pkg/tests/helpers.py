"""Random instance generators shared by the test suite."""

from __future__ import annotations

import os
from fractions import Fraction

import numpy as np

from stoqdyn.dynamics import MatrixFamily
from stoqdyn.simplex import from_columns, identity, mat_mul
from stoqdyn.statistical import DeterministicSystem


def seed() -> int:
    return int(os.environ.get("STOQDYN_SEED", "0"))


def make_rng(offset: int = 0) -> np.random.Generator:
    return np.random.default_rng([seed(), offset])


def prob_vector(rng, n: int, den: int = 6, zeros: float = 0.0) -> tuple:
    """Random rational probability vector with denominator ``den``."""
    while True:
        w = rng.multinomial(den, np.ones(n) / n)
        if zeros and n > 1:
            mask = rng.random(n) < zeros
            if not mask.all():
                w = np.where(mask, 0, w)
        if w.sum() > 0:
            return tuple(Fraction(int(x), int(w.sum())) for x in w)


def stochastic_matrix(rng, n: int, den: int = 4, zeros: float = 0.3) -> tuple:
    return from_columns([prob_vector(rng, n, den, zeros) for _ in range(n)])


def singular_matrix(rng, n: int, den: int = 4) -> tuple:
    """Stochastic matrix with two equal columns (so a nontrivial zero-sum kernel)."""
    cols = [prob_vector(rng, n, den) for _ in range(n)]
    if n > 1:
        a, b = rng.choice(n, 2, replace=False)
        cols[b] = cols[a]
    return from_columns(cols)


def matrix_family(rng, n: int, tau: int, den: int = 4, singular: float = 0.4) -> MatrixFamily:
    mats = [identity(n)]
    for _ in range(tau):
        r = rng.random()
        if r < singular:
            mats.append(singular_matrix(rng, n, den))
        elif r < singular + 0.2 and len(mats) > 1:
            # compose an earlier matrix with a stochastic factor (divisible step)
            mats.append(mat_mul(stochastic_matrix(rng, n, den), mats[-1]))
        else:
            mats.append(stochastic_matrix(rng, n, den))
    return MatrixFamily(tuple(range(tau + 1)), tuple(mats))


def trajectory(rng, n: int, tau: int, den: int = 6, zeros: float = 0.3) -> tuple:
    return tuple(prob_vector(rng, n, den, zeros) for _ in range(tau + 1))


def deterministic_system(rng, n: int, tau: int, merge: float = 0.5) -> DeterministicSystem:
    """Random D whose rows are permutations or arbitrary maps."""
    rows = [list(range(1, n + 1))]
    for _ in range(tau):
        if rng.random() < merge:
            rows.append([int(x) for x in rng.integers(1, n + 1, n)])
        else:
            rows.append([int(x) + 1 for x in rng.permutation(n)])
    return DeterministicSystem.from_rows(tuple(range(tau + 1)), rows)
