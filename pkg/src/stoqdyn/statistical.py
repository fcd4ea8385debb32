"""Statistical dynamics: ensembles of deterministic, stochastic and system-ancilla systems.

Each flavour induces a process family by mixing the per-system processes with
the initial distribution; the realization helpers go the other way and build
an ancilla (or a stochastic system) reproducing a given family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .dynamics import MatrixFamily
from .errors import BadConfig, DimensionMismatch, GridTooLarge, InvalidFamily
from .implementation import Generator, ProcessFamily, markov_implementation
from .measure import TrajectoryMeasure, Verdict, dirac, marginal_vector, mix, validate_grid
from .simplex import DEFAULT_GRID_DENOMINATOR, from_columns, mat_vec, validate_prob_vector, vertex

MAX_ANCILLA_TRAJECTORY = 4096  # N^tau for trajectory-encoding ancillas
MAX_ANCILLA_BLOCKS = 65536  # (N^tau)^N for block-encoding ancillas


# deterministic ---------------------------------------------------------------

@dataclass(frozen=True)
class DeterministicSystem:
    """``D(t, i)`` for every grid time and configuration, identity at ``t = 0``."""

    grid: tuple
    n: int
    table: Mapping = field(repr=False)

    def __post_init__(self):
        grid = validate_grid(self.grid)
        tab = {}
        for t in grid:
            for i in range(1, self.n + 1):
                if (t, i) not in self.table:
                    raise BadConfig(f"D({t},{i}) missing")
                out = int(self.table[(t, i)])
                if not 1 <= out <= self.n:
                    raise BadConfig(f"D({t},{i}) = {out} outside 1..{self.n}")
                tab[(t, i)] = out
        if any(tab[(0, i)] != i for i in range(1, self.n + 1)):
            raise BadConfig("D(0, .) must be the identity")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "table", tab)

    @classmethod
    def from_rows(cls, grid, rows: Sequence[Sequence[int]]) -> "DeterministicSystem":
        """``rows[k][i-1] = D(grid[k], i)``."""
        grid = tuple(grid)
        n = len(rows[0])
        return cls(grid, n, {(t, i + 1): rows[k][i] for k, t in enumerate(grid) for i in range(n)})

    def __call__(self, t: int, i: int) -> int:
        return self.table[(t, i)]

    def trajectory(self, i: int) -> tuple:
        return tuple(self.table[(t, i)] for t in self.grid)


def dirac_process(D: DeterministicSystem, i: int) -> TrajectoryMeasure:
    if not 1 <= i <= D.n:
        raise BadConfig(f"configuration {i} outside 1..{D.n}")
    return dirac(D.grid, D.n, D.trajectory(i))


def _point_mixture(grid, n, weighted_trajs) -> TrajectoryMeasure:
    table: dict = {}
    for traj, w in weighted_trajs:
        if w != 0:
            table[traj] = table.get(traj, Fraction(0)) + w
    return TrajectoryMeasure(grid, n, table)


def deterministic_member(D: DeterministicSystem, p0) -> TrajectoryMeasure:
    p0 = validate_prob_vector(p0)
    return _point_mixture(D.grid, D.n, ((D.trajectory(i + 1), p0[i]) for i in range(D.n)))


def deterministic_family(D: DeterministicSystem, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> ProcessFamily:
    gen = Generator("deterministic", lambda p0: deterministic_member(D, p0))
    return ProcessFamily.tabulate(D.grid, D.n, gen, max_denominator)


def deterministic_matrix_family(D: DeterministicSystem) -> MatrixFamily:
    """0/1 matrices with ``P(t)[i][j] = 1`` iff ``D(t, j) = i``."""
    mats = []
    for t in D.grid:
        mats.append(tuple(tuple(Fraction(int(D(t, j) == i)) for j in range(1, D.n + 1))
                          for i in range(1, D.n + 1)))
    return MatrixFamily(D.grid, tuple(mats))


def is_decomposable_deterministic(D: DeterministicSystem) -> Verdict:
    """No two trajectories meet at ``t'`` and separate at a later ``t``.

    On success ``data`` maps ``(t', t)`` to the map ``D(t', i) -> D(t, i)`` on the
    range of ``D_t'``.
    """
    maps = {}
    for ti, t in enumerate(D.grid):
        for tp in D.grid[:ti]:
            rule: dict = {}
            first: dict = {}
            for i in range(1, D.n + 1):
                a, b = D(tp, i), D(t, i)
                if a in rule and rule[a] != b:
                    return Verdict(False, witness={"t": t, "t_prime": tp, "i": first[a], "j": i})
                rule.setdefault(a, b)
                first.setdefault(a, i)
            maps[(tp, t)] = rule
    return Verdict(True, data=maps)


# system-ancilla --------------------------------------------------------------

@dataclass(frozen=True)
class SystemAncilla:
    """``SA(t, i, alpha)`` for every grid time, system and ancilla configuration."""

    grid: tuple
    n: int
    m: int
    table: Mapping = field(repr=False)

    def __post_init__(self):
        grid = validate_grid(self.grid)
        tab = {}
        for t in grid:
            for i in range(1, self.n + 1):
                for a in range(1, self.m + 1):
                    if (t, i, a) not in self.table:
                        raise BadConfig(f"SA({t},{i},{a}) missing")
                    out = int(self.table[(t, i, a)])
                    if not 1 <= out <= self.n:
                        raise BadConfig(f"SA({t},{i},{a}) = {out} outside 1..{self.n}")
                    if t == 0 and out != i:
                        raise BadConfig("SA(0, ., alpha) must be the identity")
                    tab[(t, i, a)] = out
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "table", tab)

    def __call__(self, t: int, i: int, alpha: int) -> int:
        return self.table[(t, i, alpha)]

    def trajectory(self, i: int, alpha: int) -> tuple:
        return tuple(self.table[(t, i, alpha)] for t in self.grid)

    def pinned(self, alpha: int) -> DeterministicSystem:
        """Deterministic system obtained by fixing the ancilla configuration."""
        return DeterministicSystem(self.grid, self.n, {(t, i): self(t, i, alpha) for t in self.grid
                                                      for i in range(1, self.n + 1)})


@dataclass(frozen=True)
class JointInitial:
    """Distribution over ``C x Lambda``; entry ``(i, alpha)`` sits at ``(i-1)*m + alpha-1``."""

    n: int
    m: int
    entries: tuple

    def __post_init__(self):
        ent = validate_prob_vector(self.entries)
        if len(ent) != self.n * self.m:
            raise DimensionMismatch(f"joint initial vector needs {self.n * self.m} entries")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def independent(cls, p0, lambda0) -> "JointInitial":
        p0 = validate_prob_vector(p0)
        lambda0 = validate_prob_vector(lambda0)
        return cls(len(p0), len(lambda0), tuple(p * q for p in p0 for q in lambda0))

    def __getitem__(self, key) -> Fraction:
        i, a = key
        return self.entries[(i - 1) * self.m + (a - 1)]

    def system_marginal(self) -> tuple:
        return tuple(sum(self.entries[k * self.m:(k + 1) * self.m], Fraction(0)) for k in range(self.n))

    def ancilla_marginal(self) -> tuple:
        return tuple(sum((self.entries[k * self.m + a] for k in range(self.n)), Fraction(0)) for a in range(self.m))


def ancilla_process(SA: SystemAncilla, pi: JointInitial) -> TrajectoryMeasure:
    """Mixture of the composite Dirac processes weighted by ``pi``."""
    if pi.n != SA.n or pi.m != SA.m:
        raise DimensionMismatch("joint initial vector does not match the system-ancilla sizes")
    return _point_mixture(SA.grid, SA.n, ((SA.trajectory(i, a), pi[(i, a)])
                                          for i in range(1, SA.n + 1) for a in range(1, SA.m + 1)))


def ancilla_family_independent(SA: SystemAncilla, lambda0, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> ProcessFamily:
    lambda0 = validate_prob_vector(lambda0)
    if len(lambda0) != SA.m:
        raise DimensionMismatch("ancilla distribution has the wrong length")
    gen = Generator("ancilla_independent", lambda p0: ancilla_process(SA, JointInitial.independent(p0, lambda0)))
    return ProcessFamily.tabulate(SA.grid, SA.n, gen, max_denominator)


def ancilla_matrix_family(SA: SystemAncilla, lambda0) -> MatrixFamily:
    """``M(t)[i][j] = sum of lambda0[alpha] over alpha with SA(t, j, alpha) = i``."""
    lambda0 = validate_prob_vector(lambda0)
    mats = []
    for t in SA.grid:
        rows = [[Fraction(0)] * SA.n for _ in range(SA.n)]
        for j in range(1, SA.n + 1):
            for a in range(1, SA.m + 1):
                i = SA(t, j, a)
                rows[i - 1][j - 1] = rows[i - 1][j - 1] + lambda0[a - 1]
        mats.append(tuple(tuple(r) for r in rows))
    return MatrixFamily(SA.grid, tuple(mats))


# stochastic ------------------------------------------------------------------

@dataclass(frozen=True)
class StochasticSystem:
    """One process per initial configuration, each starting there with certainty."""

    grid: tuple
    n: int
    processes: tuple

    def __post_init__(self):
        grid = validate_grid(self.grid)
        if len(self.processes) != self.n:
            raise DimensionMismatch(f"need {self.n} processes, got {len(self.processes)}")
        for i, mu in enumerate(self.processes, start=1):
            if mu.grid != grid or mu.n != self.n:
                raise InvalidFamily(f"process {i} lives on a different grid")
            if marginal_vector(mu, 0) != vertex(self.n, i):
                raise InvalidFamily(f"process {i} does not start in configuration {i}")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "processes", tuple(self.processes))


def stochastic_member(S: StochasticSystem, p0) -> TrajectoryMeasure:
    p0 = validate_prob_vector(p0)
    return mix(p0, S.processes)


def stochastic_family(S: StochasticSystem, max_denominator: int = DEFAULT_GRID_DENOMINATOR) -> ProcessFamily:
    gen = Generator("stochastic", lambda p0: stochastic_member(S, p0))
    return ProcessFamily.tabulate(S.grid, S.n, gen, max_denominator)


def stochastic_matrix_family(S: StochasticSystem) -> MatrixFamily:
    """Column ``j`` of ``M(t)`` is the time-``t`` marginal of process ``j``."""
    return MatrixFamily(S.grid, tuple(from_columns([marginal_vector(mu, t) for mu in S.processes]) for t in S.grid))


def derive_stochastic_from_ancilla(SA: SystemAncilla, lambda0) -> StochasticSystem:
    """``mu_i = sum_alpha lambda0[alpha] * Dirac(t -> SA(t, i, alpha))``."""
    lambda0 = validate_prob_vector(lambda0)
    if len(lambda0) != SA.m:
        raise DimensionMismatch("ancilla distribution has the wrong length")
    procs = tuple(_point_mixture(SA.grid, SA.n, ((SA.trajectory(i, a), lambda0[a - 1]) for a in range(1, SA.m + 1)))
                  for i in range(1, SA.n + 1))
    return StochasticSystem(SA.grid, SA.n, procs)


# realizations ----------------------------------------------------------------

def tail_sequences(n: int, tau: int) -> list:
    """Configuration sequences for times 1..tau, base-N big-endian (index 1 first)."""
    return list(product(range(1, n + 1), repeat=tau))


def realize_family_as_ancilla(fam: ProcessFamily) -> tuple:
    """Ancilla of size ``N^tau`` whose configurations encode trajectory tails.

    Returns ``(SA, initials)`` where ``initials`` maps every tabulated initial
    vector to the joint initial distribution ``pi(i, alpha) = member(w)`` for the
    trajectory ``w`` starting at ``i`` with tail number ``alpha``.
    """
    tau = len(fam.grid) - 1
    m = fam.n ** tau
    if m > MAX_ANCILLA_TRAJECTORY:
        raise GridTooLarge(f"ancilla size {m} exceeds {MAX_ANCILLA_TRAJECTORY}")
    tails = tail_sequences(fam.n, tau)
    table = {}
    for k, t in enumerate(fam.grid):
        for i in range(1, fam.n + 1):
            for a, tail in enumerate(tails, start=1):
                table[(t, i, a)] = i if k == 0 else tail[k - 1]
    SA = SystemAncilla(fam.grid, fam.n, m, table)
    initials = {}
    for p0, mu in fam.members.items():
        entries = tuple(mu[(i,) + tail] for i in range(1, fam.n + 1) for tail in tails)
        initials[p0] = JointInitial(fam.n, m, entries)
    return SA, initials


def realize_stochastic_as_ancilla(S: StochasticSystem) -> tuple:
    """Block-encoded ancilla of size ``(N^tau)^N`` with an independent ``lambda0``.

    Ancilla configuration ``alpha`` is a tuple of N tails; block ``r`` is the
    tail followed when the system starts in ``r``.  ``lambda0`` is the product
    of the per-block tail probabilities.  Returns ``(SA, lambda0)``.
    """
    tau = len(S.grid) - 1
    per_block = S.n ** tau
    m = per_block ** S.n
    if per_block > MAX_ANCILLA_TRAJECTORY or m > MAX_ANCILLA_BLOCKS:
        raise GridTooLarge(f"ancilla size {m} exceeds {MAX_ANCILLA_BLOCKS}")
    tails = tail_sequences(S.n, tau)
    q = [[S.processes[r][(r + 1,) + tail] for tail in tails] for r in range(S.n)]
    table = {}
    lam = []
    for a, blocks in enumerate(product(range(per_block), repeat=S.n), start=1):
        w = Fraction(1)
        for r, b in enumerate(blocks):
            w = w * q[r][b]
            if w == 0:
                break
        lam.append(w)
        for k, t in enumerate(S.grid):
            for i in range(1, S.n + 1):
                table[(t, i, a)] = i if k == 0 else tails[blocks[i - 1]][k - 1]
    return SystemAncilla(S.grid, S.n, m, table), tuple(lam)


def realize_linear_as_stochastic(fam_matrices: MatrixFamily) -> StochasticSystem:
    """Process ``i`` is the product measure of the trajectory ``t -> P(t) e_i``."""
    procs = []
    for i in range(1, fam_matrices.n + 1):
        traj = [mat_vec(fam_matrices.at(t), vertex(fam_matrices.n, i)) for t in fam_matrices.grid]
        procs.append(markov_implementation(traj, fam_matrices.grid))
    return StochasticSystem(fam_matrices.grid, fam_matrices.n, tuple(procs))


def reconstruct_family(SA: SystemAncilla, initials: Mapping) -> dict:
    """Members rebuilt from a system-ancilla realization."""
    return {p0: ancilla_process(SA, pi) for p0, pi in initials.items()}

