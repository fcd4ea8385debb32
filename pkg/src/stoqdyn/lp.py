"""Exact phase-one simplex for ``A x = b, x >= 0``.

Dense tableau over any exact ordered field (Fractions or quadratic surds),
Bland's rule for both the entering and the leaving variable, and a Farkas
certificate on infeasibility: a vector ``y`` with ``A^T y <= 0`` and
``b . y > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    x: tuple | None = None  # a feasible point when feasible
    certificate: tuple | None = None  # Farkas vector when infeasible
    pivots: int = 0


def phase_one(a: Sequence[Sequence], b: Sequence) -> FeasibilityResult:
    """Decide feasibility of ``{x >= 0 : a x = b}`` exactly."""
    m = len(a)
    n = len(a[0]) if m else 0
    # flip rows so that b >= 0; remember the flips for the certificate
    signs = [(-1 if bi < 0 else 1) for bi in b]
    rows = [[s * x for x in row] + [Fraction(int(i == k)) for k in range(m)] + [s * bi]
            for i, (row, bi, s) in enumerate(zip(a, b, signs))]
    width = n + m
    basis = [n + i for i in range(m)]
    # phase-one objective: minimise the sum of artificials; reduced costs
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    red = list(cost) + [Fraction(0)]
    for row in rows:
        red = [r - x for r, x in zip(red, row)]
    # red[j] = c_j - c_B B^-1 A_j, red[-1] = -objective
    pivots = 0
    while True:
        entering = next((j for j in range(width) if red[j] < 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i, row in enumerate(rows):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # cannot happen: the phase-one objective is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        _pivot(rows, red, leave, entering)
        basis[leave] = entering
        pivots += 1
    objective = -red[-1]
    if objective == 0:
        x = [Fraction(0)] * n
        for i, var in enumerate(basis):
            if var < n:
                x[var] = rows[i][-1]
        return FeasibilityResult(True, x=tuple(x), pivots=pivots)
    # duals of the phase-one problem: y_i = 1 - reduced cost of artificial i
    y = tuple(s * (1 - red[n + i]) for i, s in enumerate(signs))
    return FeasibilityResult(False, certificate=y, pivots=pivots)


def _pivot(rows, red, r, c):
    pr = rows[r]
    inv = 1 / pr[c]
    pr[:] = [x * inv for x in pr]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            row[:] = [x - f * y for x, y in zip(row, pr)]
    if red[c] != 0:
        f = red[c]
        red[:] = [x - f * y for x, y in zip(red, pr)]


def check_farkas(a: Sequence[Sequence], b: Sequence, y: Sequence) -> bool:
    """True iff ``y`` proves ``{x >= 0 : a x = b}`` empty."""
    n = len(a[0])
    for j in range(n):
        if sum((a[i][j] * y[i] for i in range(len(a))), Fraction(0)) > 0:
            return False
    return sum((bi * yi for bi, yi in zip(b, y)), Fraction(0)) > 0


def check_solution(a: Sequence[Sequence], b: Sequence, x: Sequence) -> bool:
    if any(v < 0 for v in x):
        return False
    return all(sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) == bi for row, bi in zip(a, b))
