"""Canonical stochastic processes on a finite time grid.

A :class:`TrajectoryMeasure` is a dense, exact probability table over all
trajectories ``C^{|T|}``.  Configurations are 1-based; times are the integer
values of the grid, not positions in it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .errors import CapExceeded, GridNotDifferenceClosed, InvalidEvent, InvalidMeasure, InvalidTime, LengthMismatch, NotMarkovian
from .scalar import UNDEFINED, as_exact

MAX_CONFIGS = 8
MARKOV_MAX_CONFIGS = 4
MARKOV_MAX_TAU = 6


def validate_grid(grid: Iterable[int]) -> tuple:
    g = tuple(int(t) for t in grid)
    if not g or g[0] != 0:
        raise InvalidTime("time grid must start at 0")
    if any(b <= a for a, b in zip(g, g[1:])):
        raise InvalidTime("time grid must be strictly increasing")
    return g


def all_trajectories(n: int, length: int):
    return product(range(1, n + 1), repeat=length)


@dataclass(frozen=True)
class TrajectoryMeasure:
    grid: tuple
    n: int
    table: Mapping = field(repr=False)

    def __post_init__(self):
        grid = validate_grid(self.grid)
        object.__setattr__(self, "grid", grid)
        if not 1 <= self.n <= MAX_CONFIGS:
            raise CapExceeded(f"n must be in 1..{MAX_CONFIGS}")
        dense = {}
        for traj in all_trajectories(self.n, len(grid)):
            dense[traj] = Fraction(0)
        total = Fraction(0)
        for traj, w in self.table.items():
            traj = tuple(int(c) for c in traj)
            if traj not in dense:
                raise InvalidMeasure(f"trajectory {traj} is not in C^|T|")
            w = as_exact(w)
            if w < 0:
                raise InvalidMeasure(f"negative weight at {traj}")
            dense[traj] = dense[traj] + w
            total = total + w
        if total != 1:
            raise InvalidMeasure(f"weights sum to {total}, not 1")
        object.__setattr__(self, "table", dense)

    def __getitem__(self, traj) -> Fraction:
        return self.table[tuple(traj)]

    def __eq__(self, other):
        if not isinstance(other, TrajectoryMeasure):
            return NotImplemented
        return self.grid == other.grid and self.n == other.n and self.table == other.table

    def __hash__(self):
        return hash((self.grid, self.n, tuple(self.table.values())))

    def support(self) -> dict:
        return {k: v for k, v in self.table.items() if v != 0}

    def index(self, t: int) -> int:
        try:
            return self.grid.index(t)
        except ValueError:
            raise InvalidTime(f"time {t} not in grid {self.grid}") from None

    def marginal(self, times: Sequence[int]) -> dict:
        """Joint distribution of the configurations at ``times`` (in the given order)."""
        idx = [self.index(t) for t in times]
        out: dict = {}
        for traj, w in self.table.items():
            if w == 0:
                continue
            key = tuple(traj[k] for k in idx)
            out[key] = out.get(key, Fraction(0)) + w
        return out


def dirac(grid: Sequence[int], n: int, traj: Sequence[int]) -> TrajectoryMeasure:
    return TrajectoryMeasure(tuple(grid), n, {tuple(traj): Fraction(1)})


def mix(weights: Sequence, measures: Sequence[TrajectoryMeasure]) -> TrajectoryMeasure:
    """Convex combination of measures on the same grid."""
    first = measures[0]
    table = {k: Fraction(0) for k in first.table}
    for w, mu in zip(weights, measures):
        if mu.grid != first.grid or mu.n != first.n:
            raise InvalidMeasure("cannot mix measures on different grids")
        if w == 0:
            continue
        for k, v in mu.table.items():
            if v != 0:
                table[k] = table[k] + w * v
    return TrajectoryMeasure(first.grid, first.n, table)


# events --------------------------------------------------------------------

def _check_event(mu: TrajectoryMeasure, event: Iterable) -> list:
    cons = []
    for pair in event:
        try:
            t, i = pair
        except (TypeError, ValueError):
            raise InvalidEvent(f"constraint {pair!r} is not a (time, config) pair") from None
        if t not in mu.grid:
            raise InvalidEvent(f"time {t} not in grid")
        if not 1 <= i <= mu.n:
            raise InvalidEvent(f"configuration {i} outside 1..{mu.n}")
        cons.append((mu.grid.index(t), int(i)))
    return cons


def joint_probability(mu: TrajectoryMeasure, event: Iterable) -> Fraction:
    """Probability of the conjunction of ``(time, config)`` constraints.

    Two different configurations at the same time make the event empty.
    """
    cons = _check_event(mu, event)
    if not cons:
        return Fraction(1)
    fixed: dict = {}
    for k, i in cons:
        if fixed.setdefault(k, i) != i:
            return Fraction(0)
    total = Fraction(0)
    for traj, w in mu.table.items():
        if w != 0 and all(traj[k] == i for k, i in fixed.items()):
            total = total + w
    return total


def marginal_vector(mu: TrajectoryMeasure, t: int) -> tuple:
    k = mu.index(t)
    out = [Fraction(0)] * mu.n
    for traj, w in mu.table.items():
        if w != 0:
            out[traj[k] - 1] = out[traj[k] - 1] + w
    return tuple(out)


def conditional(mu: TrajectoryMeasure, target: Iterable, given: Iterable):
    """``P(target | given)`` or ``UNDEFINED`` when ``P(given) = 0``."""
    target = list(target)
    given = list(given)
    _check_event(mu, target)
    den = joint_probability(mu, given)
    if den == 0:
        return UNDEFINED
    return joint_probability(mu, target + given) / den


def transition_matrix(mu: TrajectoryMeasure, t: int, t_prime: int) -> tuple:
    """Matrix of ``P(E_i(t) | E_j(t'))``; columns with a null condition are UNDEFINED."""
    k, kp = mu.index(t), mu.index(t_prime)
    pair = mu.marginal([t, t_prime]) if k != kp else {(i, i): w for (i,), w in mu.marginal([t]).items()}
    prior = marginal_vector(mu, t_prime)
    rows = []
    for i in range(1, mu.n + 1):
        row = []
        for j in range(1, mu.n + 1):
            if prior[j - 1] == 0:
                row.append(UNDEFINED)
            else:
                row.append(pair.get((i, j), Fraction(0)) / prior[j - 1])
        rows.append(tuple(row))
    return tuple(rows)


# decision procedures -------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    """Outcome of a decision procedure.  Truthy iff the property holds."""

    holds: bool
    witness: dict | None = None
    data: object = None
    on_grid: bool = False

    def __bool__(self):
        return self.holds


def _markov_caps(mu: TrajectoryMeasure):
    if mu.n > MARKOV_MAX_CONFIGS or len(mu.grid) - 1 > MARKOV_MAX_TAU:
        raise CapExceeded(f"Markov check limited to N <= {MARKOV_MAX_CONFIGS}, tau <= {MARKOV_MAX_TAU}")


def is_markovian(mu: TrajectoryMeasure) -> Verdict:
    """Check the Markov property over every increasing time tuple and assignment.

    Tuples with repeated times reduce to strictly increasing ones (a repeated
    time either duplicates a constraint or makes the condition null), so only
    strictly increasing tuples of length >= 3 are enumerated.  Comparisons with
    an undefined side are skipped.  The first violation found is returned.
    """
    _markov_caps(mu)
    grid = mu.grid
    pair_cache: dict = {}
    for size in range(3, len(grid) + 1):
        for times in combinations(grid, size):
            last, prev = times[-1], times[-2]
            joint = mu.marginal(times)
            history = mu.marginal(times[:-1])
            if (prev, last) not in pair_cache:
                pair_cache[(prev, last)] = (mu.marginal([prev, last]), mu.marginal([prev]))
            pair, single = pair_cache[(prev, last)]
            for configs in all_trajectories(mu.n, size):
                h = history.get(configs[:-1], 0)
                s = single.get((configs[-2],), 0)
                if h == 0 or s == 0:
                    continue
                lhs = joint.get(configs, Fraction(0)) / h
                rhs = pair.get((configs[-2], configs[-1]), Fraction(0)) / s
                if lhs != rhs:
                    return Verdict(False, {
                        "times": list(times),
                        "configs": list(configs),
                        "with_history": lhs,
                        "without_history": rhs,
                    })
    return Verdict(True)


def _difference_closed(grid) -> bool:
    s = set(grid)
    return all(t - tp in s for t in grid for tp in grid if tp <= t)


def is_time_homogeneous(mu: TrajectoryMeasure) -> Verdict:
    """Markovian and ``P(E_i(t)|E_j(t')) = P(E_i(t-t')|E_j(0))`` wherever both are defined."""
    if not is_markovian(mu):
        raise NotMarkovian("time-homogeneity is only defined for Markovian processes")
    if not _difference_closed(mu.grid):
        raise GridNotDifferenceClosed(f"grid {mu.grid} is not closed under differences")
    for t in mu.grid:
        for tp in mu.grid:
            if tp > t:
                continue
            a = transition_matrix(mu, t, tp)
            b = transition_matrix(mu, t - tp, 0)
            for i in range(mu.n):
                for j in range(mu.n):
                    x, y = a[i][j], b[i][j]
                    if x is UNDEFINED or y is UNDEFINED:
                        continue
                    if x != y:
                        return Verdict(False, {"t": t, "t_prime": tp, "i": i + 1, "j": j + 1,
                                               "shifted": x, "from_zero": y})
    return Verdict(True)


def _partial_product(a, b):
    """Product of partial matrices; entries touching an UNDEFINED factor are UNDEFINED."""
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Fraction(0)
            undefined = False
            for k in range(n):
                x, y = a[i][k], b[k][j]
                if y is UNDEFINED:
                    undefined = True
                    break
                if y == 0:
                    continue
                if x is UNDEFINED:
                    undefined = True
                    break
                acc = acc + x * y
            row.append(UNDEFINED if undefined else acc)
        out.append(tuple(row))
    return tuple(out)


def check_chapman_kolmogorov(mu: TrajectoryMeasure, t: int, t_prime: int) -> Verdict:
    """Compare ``M(t<-0)`` with ``M(t<-t') M(t'<-0)`` on mutually defined entries.

    An entry of the product is defined when every term with nonzero weight
    ``M(t'<-0)[k][j]`` has a defined ``M(t<-t')[i][k]``.
    """
    mu.index(t)
    mu.index(t_prime)
    if not 0 <= t_prime <= t:
        raise InvalidTime("need 0 <= t' <= t")
    direct = transition_matrix(mu, t, 0)
    two_step = _partial_product(transition_matrix(mu, t, t_prime), transition_matrix(mu, t_prime, 0))
    for i in range(mu.n):
        for j in range(mu.n):
            x, y = direct[i][j], two_step[i][j]
            if x is UNDEFINED or y is UNDEFINED:
                continue
            if x != y:
                return Verdict(False, {"i": i + 1, "j": j + 1, "direct": x, "two_step": y})
    return Verdict(True)


def is_interior(x) -> bool:
    return 0 < x < 1


def is_non_degenerate(traj: Sequence[Sequence], grid: Sequence[int] | None = None) -> bool:
    """True iff some t1 < t2 < t3 have interior entries at t1 and t3."""
    if grid is not None and len(grid) != len(traj):
        raise LengthMismatch(f"{len(traj)} vectors for a grid of {len(grid)} times")
    interior = [any(is_interior(x) for x in v) for v in traj]
    for k1 in range(len(traj)):
        for k3 in range(k1 + 2, len(traj)):
            if interior[k1] and interior[k3]:
                return True
    return False


def law_of_total_probability(mu: TrajectoryMeasure, t: int) -> bool:
    """``marginal(t) == M(t<-0) marginal(0)`` with undefined columns weighted by 0."""
    m = transition_matrix(mu, t, 0)
    p0 = marginal_vector(mu, 0)
    rhs = tuple(sum((m[i][j] * p0[j] for j in range(mu.n) if p0[j] != 0), Fraction(0)) for i in range(mu.n))
    return rhs == marginal_vector(mu, t)

