"""Stochastic process families and the implementation relation.

A :class:`ProcessFamily` assigns a trajectory measure to each initial vector.
It is tabulated on the vertices and the rational grid and may carry a
generator that builds members for other initial vectors on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .dynamics import MatrixFamily, ProbabilityDynamics, evaluate
from .errors import (
    BadWeights,
    DegenerateTrajectory,
    GridMismatch,
    InvalidFamily,
    InvalidDynamics,
    LengthMismatch,
    UnknownMember,
    UnknownSupportVector,
)
from .measure import (
    TrajectoryMeasure,
    Verdict,
    all_trajectories,
    is_interior,
    is_non_degenerate,
    marginal_vector,
    transition_matrix,
    validate_grid,
)
from .scalar import UNDEFINED, as_exact
from .simplex import DEFAULT_GRID_DENOMINATOR, rational_grid, validate_prob_vector

GENERATOR_NAMES = ("markov_product", "transition_constant", "non_markov_eps")


@dataclass(frozen=True)
class Generator:
    """Deterministic rule producing the member for any initial vector."""

    name: str
    build: Callable = field(repr=False, compare=False)

    def __call__(self, p0):
        return self.build(p0)


@dataclass(frozen=True)
class ProcessFamily:
    grid: tuple
    n: int
    members: Mapping = field(repr=False)
    generator: Generator | None = None

    def __post_init__(self):
        grid = validate_grid(self.grid)
        object.__setattr__(self, "grid", grid)
        checked = {}
        for p0, mu in self.members.items():
            p0 = validate_prob_vector(p0)
            if mu.grid != grid or mu.n != self.n:
                raise InvalidFamily(f"member for {p0} lives on a different grid")
            if marginal_vector(mu, 0) != p0:
                raise InvalidFamily(f"member for {p0} does not start from {p0}")
            checked[p0] = mu
        object.__setattr__(self, "members", checked)

    @classmethod
    def tabulate(cls, grid, n: int, generator: Generator,
                 max_denominator: int = DEFAULT_GRID_DENOMINATOR, extra=()) -> "ProcessFamily":
        pts = list(rational_grid(n, max_denominator))
        for p in extra:
            p = validate_prob_vector(p)
            if p not in pts:
                pts.append(p)
        return cls(tuple(grid), n, {p: generator(p) for p in pts}, generator)

    def member(self, p0) -> TrajectoryMeasure:
        p0 = validate_prob_vector(p0)
        if p0 in self.members:
            return self.members[p0]
        if self.generator is None:
            raise UnknownMember(f"{p0} is not tabulated and the family has no generator")
        mu = self.generator(p0)
        if marginal_vector(mu, 0) != p0:
            raise InvalidFamily(f"generator produced a member not starting at {p0}")
        return mu

    def initial_vectors(self) -> tuple:
        return tuple(self.members)


def family_dynamics(fam: ProcessFamily) -> ProbabilityDynamics:
    """Induced dynamics ``(t, p0) -> marginal of member(p0) at t``."""
    return ProbabilityDynamics.from_function(fam.grid, fam.n, lambda t, p0: marginal_vector(fam.member(p0), t))


# implementation relation -----------------------------------------------------

def implements(mu: TrajectoryMeasure, traj: Sequence[Sequence]) -> bool:
    if len(traj) != len(mu.grid):
        raise LengthMismatch(f"{len(traj)} vectors for a grid of {len(mu.grid)} times")
    return all(marginal_vector(mu, t) == tuple(as_exact(x) for x in v) for t, v in zip(mu.grid, traj))


def solution(dyn, p0) -> tuple:
    dyn = ProbabilityDynamics.wrap(dyn)
    return tuple(evaluate(dyn, t, p0) for t in dyn.grid)


def family_implements(fam: ProcessFamily, dyn) -> bool:
    dyn = ProbabilityDynamics.wrap(dyn)
    if dyn.grid != fam.grid or dyn.n != fam.n:
        raise GridMismatch("family and dynamics differ in grid or dimension")
    return all(implements(mu, solution(dyn, p0)) for p0, mu in fam.members.items())


def is_transition_constant(fam: ProcessFamily) -> Verdict:
    """Whether ``P(E_i(t) | E_j(0))`` is the same for every member where defined.

    On success ``data`` is the common :class:`MatrixFamily`.  Entries undefined
    for every tabulated member (impossible once vertices are tabulated) are
    filled from the identity.
    """
    common = {}
    first_seen = {}
    for p0, mu in fam.members.items():
        for t in fam.grid:
            m = transition_matrix(mu, t, 0)
            for i in range(fam.n):
                for j in range(fam.n):
                    x = m[i][j]
                    if x is UNDEFINED:
                        continue
                    key = (t, i, j)
                    if key not in common:
                        common[key] = x
                        first_seen[key] = p0
                    elif common[key] != x:
                        return Verdict(False, witness={
                            "t": t, "i": i + 1, "j": j + 1, "p0": first_seen[key], "q0": p0,
                            "value_p0": common[key], "value_q0": x,
                        })
    mats = []
    for t in fam.grid:
        rows = []
        for i in range(fam.n):
            rows.append(tuple(common.get((t, i, j), Fraction(int(i == j))) for j in range(fam.n)))
        mats.append(tuple(rows))
    try:
        data = MatrixFamily(fam.grid, tuple(mats))
    except InvalidDynamics:
        data = tuple(mats)
    return Verdict(True, data=data)


# constructors ----------------------------------------------------------------

def _validate_traj(traj, grid=None) -> tuple:
    vecs = tuple(validate_prob_vector(v) for v in traj)
    if any(len(v) != len(vecs[0]) for v in vecs):
        raise LengthMismatch("vectors differ in length")
    if grid is not None and len(grid) != len(vecs):
        raise LengthMismatch(f"{len(vecs)} vectors for a grid of {len(grid)} times")
    return vecs


def markov_implementation(traj: Sequence[Sequence], grid: Sequence[int] | None = None) -> TrajectoryMeasure:
    """Product measure ``mu(w) = prod_t p_{w(t)}(t)``."""
    vecs = _validate_traj(traj, grid)
    grid = tuple(grid) if grid is not None else tuple(range(len(vecs)))
    n = len(vecs[0])
    table = {}
    for w in all_trajectories(n, len(vecs)):
        x = Fraction(1)
        for k, c in enumerate(w):
            x = x * vecs[k][c - 1]
            if x == 0:
                break
        if x != 0:
            table[w] = x
    return TrajectoryMeasure(grid, n, table)


@dataclass(frozen=True)
class PerturbationPlan:
    """Choices made by the non-Markovian constructor."""

    positions: tuple  # grid positions (k1, k2, k3)
    first: tuple  # two configurations interior at k1
    middle: tuple  # two interior configurations at k2, or the single vertex
    last: tuple  # two configurations interior at k3
    epsilon: object
    degenerate_middle: bool


def _interior_pair(v) -> tuple | None:
    idx = [i + 1 for i, x in enumerate(v) if is_interior(x)]
    return tuple(idx[:2]) if len(idx) >= 2 else None


def plan_perturbation(vecs: Sequence[Sequence]) -> PerturbationPlan:
    """Pick the lexicographically first admissible time triple and the lowest pairs."""
    m = len(vecs)
    for k1 in range(m):
        first = _interior_pair(vecs[k1])
        if first is None:
            continue
        for k2 in range(k1 + 1, m):
            for k3 in range(k2 + 1, m):
                last = _interior_pair(vecs[k3])
                if last is None:
                    continue
                middle = _interior_pair(vecs[k2])
                if middle is None:
                    middle = (next(i + 1 for i, x in enumerate(vecs[k2]) if x == 1),)
                cells = _perturbed_cells(vecs, (k1, k2, k3), first, middle, last)
                slacks = [(1 - base) if sign > 0 else base for _, base, sign in cells]
                eps = min(slacks) / 2
                return PerturbationPlan((k1, k2, k3), first, middle, last, eps, len(middle) == 1)
    raise DegenerateTrajectory("trajectory has no interior entries at two times around a third")


def _perturbed_cells(vecs, pos, first, middle, last):
    """(cell, unperturbed value, sign) for the cells that receive +-epsilon."""
    k1, k2, k3 = pos
    out = []
    for a, j in enumerate(first, start=1):
        for b, l in enumerate(middle, start=1):
            for c, n_ in enumerate(last, start=1):
                base = vecs[k1][j - 1] * vecs[k2][l - 1] * vecs[k3][n_ - 1]
                sign = 1 if (a + b + c) % 2 == 1 else -1
                out.append(((j, l, n_), base, sign))
    return out


def perturbed_kernel(vecs, plan: PerturbationPlan) -> dict:
    """Joint law ``K[j, l, n]`` of the three selected times."""
    k1, k2, k3 = plan.positions
    n = len(vecs[0])
    K = {}
    for j in range(1, n + 1):
        for l in range(1, n + 1):
            for n_ in range(1, n + 1):
                K[(j, l, n_)] = vecs[k1][j - 1] * vecs[k2][l - 1] * vecs[k3][n_ - 1]
    for cell, base, sign in _perturbed_cells(vecs, plan.positions, plan.first, plan.middle, plan.last):
        K[cell] = base + sign * plan.epsilon
    return K


def non_markov_implementation(traj: Sequence[Sequence], grid: Sequence[int] | None = None) -> TrajectoryMeasure:
    """Implementation that violates the Markov property.

    Three times are coupled through a joint law whose pairwise marginals are
    products but whose three-way law is perturbed by ``+-epsilon`` in a parity
    pattern; all other times are independent.  When the middle time is a
    vertex only the outer pair is perturbed.  ``epsilon`` is half the smallest
    slack of the perturbed cells.
    """
    vecs = _validate_traj(traj, grid)
    grid = tuple(grid) if grid is not None else tuple(range(len(vecs)))
    if not is_non_degenerate(vecs):
        raise DegenerateTrajectory("no non-Markovian implementation exists for a degenerate trajectory")
    plan = plan_perturbation(vecs)
    K = perturbed_kernel(vecs, plan)
    k1, k2, k3 = plan.positions
    n = len(vecs[0])
    table = {}
    for w in all_trajectories(n, len(vecs)):
        x = K[(w[k1], w[k2], w[k3])]
        for k, c in enumerate(w):
            if x == 0:
                break
            if k not in plan.positions:
                x = x * vecs[k][c - 1]
        if x != 0:
            table[w] = x
    return TrajectoryMeasure(grid, n, table)


def transition_constant_family(fam_matrices: MatrixFamily,
                               max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> ProcessFamily:
    """Family with ``mu_p0(w) = p0[w(0)] * prod_{t>0} P(t)[w(t), w(0)]``."""
    if not isinstance(fam_matrices, MatrixFamily):
        raise InvalidFamily("transition_constant_family needs a MatrixFamily")
    if any(t < 0 for t in fam_matrices.grid):
        raise InvalidFamily("times must be non-negative integers")
    gen = Generator("transition_constant", lambda p0: transition_constant_member(fam_matrices, p0))
    return ProcessFamily.tabulate(fam_matrices.grid, fam_matrices.n, gen, max_denominator)


def transition_constant_member(fam: MatrixFamily, p0) -> TrajectoryMeasure:
    p0 = validate_prob_vector(p0)
    n = fam.n
    table = {}
    for w in all_trajectories(n, len(fam.grid)):
        x = p0[w[0] - 1]
        for k in range(1, len(w)):
            if x == 0:
                break
            x = x * fam.matrices[k][w[k] - 1][w[0] - 1]
        if x != 0:
            table[w] = x
    return TrajectoryMeasure(fam.grid, n, table)


def markov_product_family(dyn, max_denominator: int = DEFAULT_GRID_DENOMINATOR, extra=()) -> ProcessFamily:
    """Member for ``p0`` is the product measure of the solution from ``p0``."""
    dyn = ProbabilityDynamics.wrap(dyn)
    gen = Generator("markov_product", lambda p0: markov_implementation(solution(dyn, p0), dyn.grid))
    return ProcessFamily.tabulate(dyn.grid, dyn.n, gen, max_denominator, extra)


def non_markov_family(dyn, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> ProcessFamily:
    """Non-Markovian member wherever the solution is non-degenerate, product measure elsewhere."""
    dyn = ProbabilityDynamics.wrap(dyn)

    def build(p0):
        sol = solution(dyn, p0)
        if is_non_degenerate(sol):
            return non_markov_implementation(sol, dyn.grid)
        return markov_implementation(sol, dyn.grid)

    return ProcessFamily.tabulate(dyn.grid, dyn.n, Generator("non_markov_eps", build), max_denominator)


# finite inner representation ---------------------------------------------------

@dataclass(frozen=True)
class InnerRepresentation:
    """Single measure on trajectories x support indices; conditioning recovers members."""

    grid: tuple
    n: int
    support: tuple  # ((p, weight), ...)
    joint: Mapping = field(repr=False)

    def conditional_member(self, k: int) -> TrajectoryMeasure:
        w = self.support[k][1]
        table = {traj: v / w for (traj, idx), v in self.joint.items() if idx == k and v != 0}
        return TrajectoryMeasure(self.grid, self.n, table)

    def trajectory_marginal(self) -> TrajectoryMeasure:
        table: dict = {}
        for (traj, _), v in self.joint.items():
            if v != 0:
                table[traj] = table.get(traj, Fraction(0)) + v
        return TrajectoryMeasure(self.grid, self.n, table)


def finite_inner_representation(fam: ProcessFamily, support: Sequence) -> InnerRepresentation:
    """``joint(w, k) = weight_k * member(p_k)(w)``."""
    pts = []
    for entry in support:
        try:
            p, w = entry
        except (TypeError, ValueError):
            raise BadWeights(f"support entry {entry!r} is not a (vector, weight) pair") from None
        w = as_exact(w)
        if w <= 0:
            raise BadWeights(f"weight {w} is not positive")
        p = validate_prob_vector(p)
        if p not in fam.members:
            raise UnknownSupportVector(f"{p} is not a tabulated member")
        pts.append((p, w))
    if not pts or sum(w for _, w in pts) != 1:
        raise BadWeights("weights must sum to 1")
    joint = {}
    for k, (p, w) in enumerate(pts):
        for traj, v in fam.members[p].table.items():
            joint[(traj, k)] = w * v
    return InnerRepresentation(fam.grid, fam.n, tuple(pts), joint)

