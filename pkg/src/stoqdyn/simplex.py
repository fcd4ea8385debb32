"""Probability vectors, column-stochastic matrices and exact linear algebra.

Vectors are tuples of exact scalars.  Matrices are tuples of row tuples and
follow the column convention: ``M[i][j]`` is the probability of landing in
configuration ``i+1`` from configuration ``j+1``, so every column sums to one.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .errors import DimensionMismatch, LambdaOutOfRange, NotNormalized, NotStochastic, OutOfRange
from .scalar import as_exact

Vector = tuple
Matrix = tuple  # tuple of row tuples

DEFAULT_GRID_DENOMINATOR = 6


def validate_prob_vector(v: Iterable) -> Vector:
    """Return ``v`` as an exact tuple if it is a probability vector."""
    vec = tuple(as_exact(x) for x in v)
    if not vec:
        raise DimensionMismatch("probability vector must have at least one entry")
    for x in vec:
        if x < 0 or x > 1:
            raise OutOfRange(f"entry {x} outside [0,1]")
    if sum(vec) != 1:
        raise NotNormalized(f"entries sum to {sum(vec)}, not 1")
    return vec


def is_prob_vector(v: Sequence) -> bool:
    try:
        validate_prob_vector(v)
    except (ValueError, TypeError):
        return False
    return True


def as_matrix(m: Iterable[Iterable]) -> Matrix:
    rows = tuple(tuple(as_exact(x) for x in row) for row in m)
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged or empty matrix")
    return rows


def validate_stochastic_matrix(m: Iterable[Iterable]) -> Matrix:
    """Return ``m`` as an exact square matrix whose columns are probability vectors."""
    mat = as_matrix(m)
    if len(mat) != len(mat[0]):
        raise DimensionMismatch("stochastic matrix must be square")
    for j, col in enumerate(columns(mat)):
        try:
            validate_prob_vector(col)
        except (NotNormalized, OutOfRange) as exc:
            raise NotStochastic(f"column {j + 1}: {exc}") from exc
    return mat


def is_stochastic(m) -> bool:
    try:
        validate_stochastic_matrix(m)
    except (ValueError, TypeError):
        return False
    return True


def columns(m: Matrix) -> tuple:
    return tuple(zip(*m))


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*cols))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def vertex(n: int, i: int) -> Vector:
    """Standard basis vector e_i with 1-based ``i``."""
    return tuple(Fraction(int(k == i - 1)) for k in range(n))


def mat_vec(m: Matrix, v: Sequence) -> Vector:
    if len(m[0]) != len(v):
        raise DimensionMismatch(f"matrix has {len(m[0])} columns, vector has {len(v)} entries")
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise DimensionMismatch("inner dimensions differ")
    bt = columns(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_zero_matrix(m: Matrix) -> bool:
    return all(x == 0 for row in m for x in row)


def apply_matrix(m: Matrix, p: Sequence) -> Vector:
    """Exact product ``M p`` of a stochastic matrix and a probability vector."""
    mat = validate_stochastic_matrix(m)
    vec = validate_prob_vector(p)
    if len(mat[0]) != len(vec):
        raise DimensionMismatch(f"{len(mat)}x{len(mat[0])} matrix applied to length-{len(vec)} vector")
    return mat_vec(mat, vec)


def convex_combine(lam, p: Sequence, q: Sequence) -> Vector:
    """``lam*p + (1-lam)*q``."""
    lam = as_exact(lam)
    if lam < 0 or lam > 1:
        raise LambdaOutOfRange(f"weight {lam} outside [0,1]")
    p = validate_prob_vector(p)
    q = validate_prob_vector(q)
    if len(p) != len(q):
        raise DimensionMismatch("vectors differ in length")
    return tuple(lam * a + (1 - lam) * b for a, b in zip(p, q))


def mixture(weights: Sequence, vectors: Sequence[Sequence]) -> Vector:
    """Weighted sum of vectors (no validation)."""
    n = len(vectors[0])
    out = [Fraction(0)] * n
    for w, v in zip(weights, vectors):
        for k in range(n):
            out[k] += w * v[k]
    return tuple(out)


def rational_grid(n: int, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> tuple:
    """All points of the simplex whose entries have a common denominator <= ``max_denominator``.

    Ordered by smallest denominator first, then lexicographically descending, so
    vertices come first and (1/2, 1/2) is the first interior point for n = 2.
    """
    seen = set()
    out = []
    for d in range(1, max_denominator + 1):
        pts = []
        for combo in combinations_with_replacement(range(n), d):
            counts = [0] * n
            for c in combo:
                counts[c] += 1
            pts.append(tuple(Fraction(c, d) for c in counts))
        pts.sort(reverse=True)
        for p in pts:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return tuple(out)


# exact Gaussian elimination -------------------------------------------------

def rref(m: Sequence[Sequence]) -> tuple[list, list]:
    """Reduced row echelon form and pivot column indices."""
    a = [list(row) for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence]) -> list:
    """Basis of ``{x : m x = 0}`` as a list of exact vectors."""
    cols = len(m[0])
    a, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -a[r][f]
        basis.append(tuple(x))
    return basis


def inverse(m: Matrix):
    """Exact inverse, or ``None`` if ``m`` is singular."""
    n = len(m)
    aug = [list(row) + list(e) for row, e in zip(m, identity(n))]
    a, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in a)


def range_basis(m: Matrix) -> tuple[list, list]:
    """Indices of a maximal independent set of columns and the columns themselves."""
    _, pivots = rref(m)
    cols = columns(m)
    return pivots, [cols[j] for j in pivots]
