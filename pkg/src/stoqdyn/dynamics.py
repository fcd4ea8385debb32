"""Probability dynamics and their structural decision procedures.

A dynamics maps ``(t, p0)`` to a probability vector with ``P(0, p0) = p0``.  It
is held in one of three representations: a :class:`MatrixFamily` (linear by
construction), a :class:`TabulatedMap` (finitely many initial vectors) or a
:class:`BlackBox` evaluator.  Checks on the last two are exhaustive over the
rational grid of simplex points with denominator at most ``G`` and are labelled
``on_grid``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import GridNotDifferenceClosed, InvalidDynamics, InvalidTime, NotDecomposable
from .lp import phase_one
from .measure import Verdict, validate_grid
from .scalar import as_exact
from .simplex import (
    DEFAULT_GRID_DENOMINATOR,
    columns,
    from_columns,
    identity,
    inverse,
    mat_mul,
    mat_vec,
    nullspace,
    range_basis,
    rational_grid,
    validate_prob_vector,
    validate_stochastic_matrix,
    vertex,
)


@dataclass(frozen=True)
class MatrixFamily:
    """Column-stochastic matrices ``P(t)`` for every grid time, identity at 0."""

    grid: tuple
    matrices: tuple

    def __post_init__(self):
        grid = validate_grid(self.grid)
        if len(self.matrices) != len(grid):
            raise InvalidDynamics(f"{len(self.matrices)} matrices for {len(grid)} grid times")
        mats = tuple(validate_stochastic_matrix(m) for m in self.matrices)
        n = len(mats[0])
        if any(len(m) != n for m in mats):
            raise InvalidDynamics("matrices differ in size")
        if mats[0] != identity(n):
            raise InvalidDynamics("P(0) must be the identity")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "matrices", mats)

    @classmethod
    def from_mapping(cls, mats: Mapping[int, Sequence]) -> "MatrixFamily":
        grid = tuple(sorted(mats))
        return cls(grid, tuple(mats[t] for t in grid))

    @property
    def n(self) -> int:
        return len(self.matrices[0])

    def at(self, t: int):
        try:
            return self.matrices[self.grid.index(t)]
        except ValueError:
            raise InvalidTime(f"time {t} not in grid {self.grid}") from None


@dataclass(frozen=True)
class TabulatedMap:
    """Solutions for finitely many initial vectors: ``p0 -> (p(t) for t in grid)``."""

    grid: tuple
    n: int
    points: Mapping = field(repr=False)

    def __post_init__(self):
        grid = validate_grid(self.grid)
        pts = {}
        for p0, traj in self.points.items():
            p0 = validate_prob_vector(p0)
            traj = tuple(validate_prob_vector(v) for v in traj)
            if len(p0) != self.n or len(traj) != len(grid) or any(len(v) != self.n for v in traj):
                raise InvalidDynamics("tabulated point has wrong dimensions")
            if traj[0] != p0:
                raise InvalidDynamics(f"solution from {p0} does not start at {p0}")
            pts[p0] = traj
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class BlackBox:
    """Arbitrary evaluator ``fn(t, p0) -> probability vector``."""

    grid: tuple
    n: int
    fn: Callable = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "grid", validate_grid(self.grid))


@dataclass(frozen=True)
class ProbabilityDynamics:
    grid: tuple
    n: int
    repr: object

    @classmethod
    def wrap(cls, obj) -> "ProbabilityDynamics":
        if isinstance(obj, ProbabilityDynamics):
            return obj
        if isinstance(obj, (MatrixFamily, TabulatedMap, BlackBox)):
            return cls(obj.grid, obj.n, obj)
        raise TypeError(f"cannot interpret {type(obj).__name__} as a probability dynamics")

    @classmethod
    def from_function(cls, grid, n: int, fn: Callable) -> "ProbabilityDynamics":
        return cls.wrap(BlackBox(tuple(grid), n, fn))

    @property
    def is_matrix_family(self) -> bool:
        return isinstance(self.repr, MatrixFamily)

    def evaluation_points(self, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> tuple:
        if isinstance(self.repr, TabulatedMap):
            grid = rational_grid(self.n, max_denominator)
            tab = self.repr.points
            # grid points first (in grid order), then any extra tabulated points
            return tuple(p for p in grid if p in tab) + tuple(p for p in tab if p not in set(grid))
        return rational_grid(self.n, max_denominator)


def evaluate(dyn, t: int, p0: Sequence) -> tuple:
    """The solution starting at ``p0`` evaluated at time ``t``."""
    dyn = ProbabilityDynamics.wrap(dyn)
    if t not in dyn.grid:
        raise InvalidTime(f"time {t} not in grid {dyn.grid}")
    p0 = validate_prob_vector(p0)
    if len(p0) != dyn.n:
        raise InvalidDynamics(f"initial vector has {len(p0)} entries, dynamics has n={dyn.n}")
    rep = dyn.repr
    if isinstance(rep, MatrixFamily):
        return mat_vec(rep.at(t), p0)
    if isinstance(rep, TabulatedMap):
        if p0 not in rep.points:
            raise InvalidDynamics(f"initial vector {p0} is not tabulated")
        return rep.points[p0][rep.grid.index(t)]
    try:
        out = validate_prob_vector(rep.fn(t, p0))
    except (ValueError, TypeError) as exc:
        raise InvalidDynamics(f"evaluator returned an invalid vector at t={t}: {exc}") from exc
    if len(out) != dyn.n:
        raise InvalidDynamics("evaluator returned a vector of the wrong length")
    if t == 0 and out != p0:
        raise InvalidDynamics("dynamics is not the identity at t=0")
    return out


def _can_evaluate(dyn: ProbabilityDynamics, p) -> bool:
    return not isinstance(dyn.repr, TabulatedMap) or tuple(p) in dyn.repr.points


# linearity -------------------------------------------------------------------

def candidate_family(dyn) -> MatrixFamily:
    """Matrices whose j-th column is ``P_t(e_j)``."""
    dyn = ProbabilityDynamics.wrap(dyn)
    if dyn.is_matrix_family:
        return dyn.repr
    mats = []
    for t in dyn.grid:
        cols = [evaluate(dyn, t, vertex(dyn.n, j)) for j in range(1, dyn.n + 1)]
        mats.append(from_columns(cols))
    return MatrixFamily(dyn.grid, tuple(mats))


def _linearity_witness(dyn, t, x, mat):
    """Reduce a failing multi-vertex point to a violated two-point mixture."""
    n = dyn.n
    while True:
        support = [k for k in range(n) if x[k] != 0]
        j = support[0]
        lam = x[j]
        e = vertex(n, j + 1)
        y = tuple((x[k] - lam * e[k]) / (1 - lam) for k in range(n))
        if not _can_evaluate(dyn, y):
            return {"t": t, "p": x, "q": None, "lambda": None,
                    "value": evaluate(dyn, t, x), "mixture": mat_vec(mat, x)}
        px, pe, py = evaluate(dyn, t, x), evaluate(dyn, t, e), evaluate(dyn, t, y)
        mixed = tuple(lam * a + (1 - lam) * b for a, b in zip(pe, py))
        if px != mixed:
            return {"t": t, "p": e, "q": y, "lambda": lam, "value": px, "mixture": mixed}
        x = y


def is_linear(dyn, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> Verdict:
    """Convex-combination preservation.

    Builds the candidate matrices from the vertex images and compares them with
    the dynamics on every grid point (and every tabulated point).  On failure
    the witness is ``(t, p, q, lambda)`` with
    ``P_t(lambda p + (1-lambda) q) != lambda P_t(p) + (1-lambda) P_t(q)``.
    """
    dyn = ProbabilityDynamics.wrap(dyn)
    if dyn.is_matrix_family:
        return Verdict(True, data=dyn.repr)
    fam = candidate_family(dyn)
    points = dyn.evaluation_points(max_denominator)
    for t in dyn.grid:
        mat = fam.at(t)
        for p in points:
            if evaluate(dyn, t, p) != mat_vec(mat, p):
                return Verdict(False, witness=_linearity_witness(dyn, t, p, mat), on_grid=True)
    return Verdict(True, data=fam, on_grid=True)


# decomposability -------------------------------------------------------------

def zero_sum_kernel(mat) -> list:
    """Basis of ``ker(mat)`` intersected with the zero-sum hyperplane."""
    n = len(mat[0])
    stacked = list(mat) + [tuple(Fraction(1) for _ in range(n))]
    return nullspace(stacked)


def _split_direction(k) -> tuple:
    """Two simplex points whose difference is proportional to zero-sum ``k``."""
    pos = tuple(x if x > 0 else Fraction(0) for x in k)
    neg = tuple(-x if x < 0 else Fraction(0) for x in k)
    s = sum(pos)
    return tuple(x / s for x in pos), tuple(x / s for x in neg)


def _pair_kernel_test(fam: MatrixFamily, t: int, tp: int):
    """None when P(t) vanishes on the zero-sum kernel of P(t'), else a witness."""
    pt = fam.at(t)
    for k in zero_sum_kernel(fam.at(tp)):
        if any(x != 0 for x in mat_vec(pt, k)):
            p0, q0 = _split_direction(k)
            return {"t": t, "t_prime": tp, "p0": p0, "q0": q0,
                    "image_t_prime": mat_vec(fam.at(tp), p0),
                    "image_t": (mat_vec(pt, p0), mat_vec(pt, q0))}
    return None


def _restricted_map(fam: MatrixFamily, t: int, tp: int) -> dict:
    piv, basis = range_basis(fam.at(tp))
    cols_t = columns(fam.at(t))
    return {"range_basis": [tuple(b) for b in basis], "images": [tuple(cols_t[j]) for j in piv]}


def is_decomposable(dyn, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> Verdict:
    """Whether ``P_t`` factors through ``P_t'`` for every ``t' <= t``.

    Matrix families use the kernel test: ``P(t) K = 0`` for a basis ``K`` of the
    zero-sum kernel of ``P(t')``.  Other representations use the direct test
    ``P_t'(p) = P_t'(q) => P_t(p) = P_t(q)`` over grid pairs.  On success
    ``data`` maps each ``(t', t)`` to its decomposing map on the range of
    ``P_t'``; on failure the witness is ``(t, t', p0, q0)``.
    """
    dyn = ProbabilityDynamics.wrap(dyn)
    maps = {}
    if dyn.is_matrix_family:
        fam = dyn.repr
        for ti, t in enumerate(fam.grid):
            for tp in fam.grid[:ti]:
                w = _pair_kernel_test(fam, t, tp)
                if w is not None:
                    return Verdict(False, witness=w)
                maps[(tp, t)] = _restricted_map(fam, t, tp)
        return Verdict(True, data=maps)
    points = dyn.evaluation_points(max_denominator)
    values = {t: [evaluate(dyn, t, p) for p in points] for t in dyn.grid}
    for ti, t in enumerate(dyn.grid):
        for tp in dyn.grid[:ti]:
            seen: dict = {}
            for k, p in enumerate(points):
                img = values[tp][k]
                if img in seen:
                    other = seen[img]
                    if values[t][other] != values[t][k]:
                        return Verdict(False, witness={
                            "t": t, "t_prime": tp, "p0": points[other], "q0": p,
                            "image_t_prime": img, "image_t": (values[t][other], values[t][k]),
                        }, on_grid=True)
                else:
                    seen[img] = k
            maps[(tp, t)] = {img: values[t][k] for img, k in seen.items()}
    return Verdict(True, data=maps, on_grid=True)


@dataclass(frozen=True)
class NoMatrixForm:
    """Decomposing map with a singular ``P(t')``: its action on a basis of the range."""

    range_basis: tuple
    images: tuple


def decomposing_map_matrix(fam: MatrixFamily, t: int, t_prime: int):
    """``P(t) P(t')^-1`` when ``P(t')`` is invertible, else :class:`NoMatrixForm`.

    Only ``t' <= t`` is supported.
    """
    if t not in fam.grid or t_prime not in fam.grid:
        raise InvalidTime("times must belong to the grid")
    if t_prime > t:
        raise InvalidTime("decomposing maps are only defined for t' <= t")
    if _pair_kernel_test(fam, t, t_prime) is not None:
        raise NotDecomposable(f"P_{t} does not factor through P_{t_prime}")
    inv = inverse(fam.at(t_prime))
    if inv is not None:
        return mat_mul(fam.at(t), inv)
    data = _restricted_map(fam, t, t_prime)
    return NoMatrixForm(tuple(data["range_basis"]), tuple(data["images"]))


# divisibility ----------------------------------------------------------------

DIVISIBLE = "DIVISIBLE"
NOT_DIVISIBLE = "NOT_DIVISIBLE"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class PairDivisibility:
    status: str
    factor: tuple | None = None
    certificate: dict | None = None


@dataclass(frozen=True)
class DivisibilityReport:
    pairs: dict

    @property
    def divisible(self) -> bool:
        return all(p.status == DIVISIBLE for p in self.pairs.values())

    def __bool__(self):
        return self.divisible

    def failing_pairs(self) -> list:
        return [k for k, p in self.pairs.items() if p.status != DIVISIBLE]


def factor_system(a, b) -> tuple:
    """Equality system for ``X a = b`` with column sums of ``X`` equal to one.

    Variables are the entries of ``X`` in row-major order.
    """
    n = len(a)
    rows, rhs = [], []
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[i * n + k] = a[k][j]
            rows.append(row)
            rhs.append(b[i][j])
    for k in range(n):
        row = [Fraction(0)] * (n * n)
        for i in range(n):
            row[i * n + k] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(1))
    return rows, rhs


def verify_certificate(a, b, cert: dict) -> bool:
    """Exact Farkas check: ``(Y a^T)_ik + z_k <= 0`` for all i, k and ``<Y, b> + sum z > 0``."""
    y, z = cert["y"], cert["z"]
    n = len(a)
    for i in range(n):
        for k in range(n):
            if sum((y[i][j] * a[k][j] for j in range(n)), Fraction(0)) + z[k] > 0:
                return False
    total = sum((y[i][j] * b[i][j] for i in range(n) for j in range(n)), Fraction(0)) + sum(z, Fraction(0))
    return total > 0


def stochastic_factor(a, b) -> PairDivisibility:
    """Solve ``X a = b`` over stochastic ``X`` exactly."""
    n = len(a)
    rows, rhs = factor_system(a, b)
    res = phase_one(rows, rhs)
    if res.feasible:
        x = res.x
        return PairDivisibility(DIVISIBLE, factor=tuple(tuple(x[i * n + k] for k in range(n)) for i in range(n)))
    y = res.certificate
    cert = {"y": tuple(tuple(y[i * n + j] for j in range(n)) for i in range(n)), "z": tuple(y[n * n:])}
    return PairDivisibility(NOT_DIVISIBLE, certificate=cert)


def is_divisible(dyn) -> DivisibilityReport:
    """Stochastic factors ``X P(t') = P(t)`` for every pair ``t' < t``."""
    dyn = ProbabilityDynamics.wrap(dyn)
    pairs = {}
    lin = is_linear(dyn)
    if not lin:
        for ti, t in enumerate(dyn.grid):
            for tp in dyn.grid[:ti]:
                pairs[(tp, t)] = PairDivisibility(NOT_APPLICABLE)
        return DivisibilityReport(pairs)
    fam = lin.data
    for ti, t in enumerate(fam.grid):
        for tp in fam.grid[:ti]:
            pairs[(tp, t)] = stochastic_factor(fam.at(tp), fam.at(t))
    return DivisibilityReport(pairs)


# time homogeneity ------------------------------------------------------------

def is_time_homogeneous_dynamics(dyn, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> Verdict:
    """``P_t = P_{t-t'} o P_t'`` for all ``t' <= t``."""
    dyn = ProbabilityDynamics.wrap(dyn)
    grid = set(dyn.grid)
    if any(t - tp not in grid for t in dyn.grid for tp in dyn.grid if tp <= t):
        raise GridNotDifferenceClosed(f"grid {dyn.grid} is not closed under differences")
    if dyn.is_matrix_family:
        fam = dyn.repr
        for t in fam.grid:
            for tp in fam.grid:
                if tp <= t and fam.at(t) != mat_mul(fam.at(t - tp), fam.at(tp)):
                    return Verdict(False, witness={"t": t, "t_prime": tp})
        return Verdict(True)
    for t in dyn.grid:
        for tp in dyn.grid:
            if tp > t:
                continue
            for p in dyn.evaluation_points(max_denominator):
                mid = evaluate(dyn, tp, p)
                if not _can_evaluate(dyn, mid):
                    continue
                if evaluate(dyn, t, p) != evaluate(dyn, t - tp, mid):
                    return Verdict(False, witness={"t": t, "t_prime": tp, "p0": p}, on_grid=True)
    return Verdict(True, on_grid=True)


def matrix_power_family(m, tau: int) -> MatrixFamily:
    """Time-homogeneous family ``P(t) = M^t`` on ``{0..tau}``."""
    m = validate_stochastic_matrix(m)
    mats = [identity(len(m))]
    for _ in range(tau):
        mats.append(mat_mul(mats[-1], m))
    return MatrixFamily(tuple(range(tau + 1)), tuple(mats))


def as_exact_matrix(m) -> tuple:
    return tuple(tuple(as_exact(x) for x in row) for row in m)
