"""Quantum probability evolution in float arithmetic.

Configurations correspond to the standard basis; every comparison uses the
tolerance ``TOL = 1e-9``.  Nothing here picks a privileged set of initial
states: a probability dynamics from unitary evolution needs a caller-supplied
selection ``p0 -> |psi>`` (see :func:`quantum_probability_dynamics`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidTime,
    NotDensityMatrix,
    NotNormalized,
    NotUnitary,
    PreconditionFailed,
    SingularIntermediate,
    WrongDimension,
)
from .measure import validate_grid
from .scalar import TOL


def _state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.vdot(v, v).real - 1) > TOL:
        raise NotNormalized(f"state has squared norm {np.vdot(v, v).real}")
    return v


def is_unitary(u, tol: float = TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and np.allclose(u.conj().T @ u, np.eye(len(u)), atol=tol)


def _unitary(u) -> np.ndarray:
    m = np.asarray(u, dtype=complex)
    if not is_unitary(m):
        raise NotUnitary("matrix is not unitary within tolerance")
    return m


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class UnitaryFamily:
    grid: tuple
    matrices: tuple = field(repr=False)

    def __post_init__(self):
        grid = validate_grid(self.grid)
        if len(self.matrices) != len(grid):
            raise DimensionMismatch(f"{len(self.matrices)} unitaries for {len(grid)} times")
        mats = tuple(_unitary(u) for u in self.matrices)
        d = len(mats[0])
        if any(m.shape != (d, d) for m in mats):
            raise DimensionMismatch("unitaries differ in size")
        if not np.allclose(mats[0], np.eye(d), atol=TOL):
            raise NotUnitary("U(0) must be the identity")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "matrices", mats)

    @property
    def dim(self) -> int:
        return len(self.matrices[0])

    def at(self, t: int) -> np.ndarray:
        try:
            return self.matrices[self.grid.index(t)]
        except ValueError:
            raise InvalidTime(f"time {t} not in grid {self.grid}") from None

    def relative(self, t: int, t_prime: int) -> np.ndarray:
        """``U(t <- t') = U(t) U(t')^-1``."""
        return self.at(t) @ self.at(t_prime).conj().T


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_unitary_family(d: int, tau: int, rng: np.random.Generator) -> UnitaryFamily:
    return UnitaryFamily(tuple(range(tau + 1)), (np.eye(d, dtype=complex),) + tuple(random_unitary(d, rng) for _ in range(tau)))


def random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


# Born rule -------------------------------------------------------------------

def born_vector(psi, basis=None) -> np.ndarray:
    """``|<b_i|psi>|^2`` for the columns ``b_i`` of ``basis`` (standard basis by default)."""
    v = _state(psi)
    if basis is None:
        amps = v
    else:
        b = _unitary(basis)
        if len(b) != len(v):
            raise DimensionMismatch("basis and state differ in dimension")
        amps = b.conj().T @ v
    p = np.abs(amps) ** 2
    if abs(p.sum() - 1) > TOL:
        raise NotNormalized("Born probabilities do not sum to 1")
    return p


def born_trajectory(psi, U: UnitaryFamily) -> list:
    v = _state(psi)
    if len(v) != U.dim:
        raise DimensionMismatch("state and unitaries differ in dimension")
    return [np.abs(U.at(t) @ v) ** 2 for t in U.grid]


@dataclass(frozen=True)
class ViolationRecord:
    t: int
    violation: float  # sup-norm of p_psi(t) - [lam p_phi(t) + (1-lam) p_chi(t)]
    difference: np.ndarray
    cross_terms: np.ndarray
    agrees: bool


def quantum_linearity_violation(U: UnitaryFamily, lam: float, phi, chi, psi) -> list:
    """Per-time failure of convex-combination preservation for a superposition.

    ``psi`` must be a superposition ``a phi + b chi`` with ``|a|^2 = lam`` and
    ``|b|^2 = 1 - lam`` whose initial Born vector is the corresponding mixture;
    the difference at time t then equals the interference term
    ``2 Re(conj(a <i|U phi>) b <i|U chi>)`` entrywise.
    """
    phi, chi, psi = _state(phi), _state(chi), _state(psi)
    if not 0 <= lam <= 1:
        raise PreconditionFailed("lambda must lie in [0, 1]")
    p0 = np.abs(psi) ** 2
    mixture0 = lam * np.abs(phi) ** 2 + (1 - lam) * np.abs(chi) ** 2
    if np.max(np.abs(p0 - mixture0)) > TOL:
        raise PreconditionFailed("initial Born vector is not the lambda-mixture")
    basis = np.column_stack([phi, chi])
    coeffs, *_ = np.linalg.lstsq(basis, psi, rcond=None)
    if np.max(np.abs(basis @ coeffs - psi)) > TOL:
        raise PreconditionFailed("psi is not a superposition of phi and chi")
    a, b = coeffs
    gram = basis.conj().T @ basis
    expected = np.array([[1, 0], [0, 1]])
    if abs(abs(a) ** 2 - lam) > TOL or abs(abs(b) ** 2 - (1 - lam)) > TOL or not np.allclose(gram, expected, atol=TOL):
        raise PreconditionFailed("psi must be a superposition of orthonormal phi, chi with weights lambda, 1-lambda")
    out = []
    for t in U.grid:
        u = U.at(t)
        up, uc, us = u @ phi, u @ chi, u @ psi
        diff = np.abs(us) ** 2 - lam * np.abs(up) ** 2 - (1 - lam) * np.abs(uc) ** 2
        cross = 2 * np.real(np.conj(a * up) * b * uc)
        out.append(ViolationRecord(t, float(np.max(np.abs(diff))), diff, cross,
                                   bool(np.allclose(diff, cross, atol=TOL))))
    return out


# density matrices ------------------------------------------------------------

def validate_density(rho) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise NotDensityMatrix("density matrix must be square")
    if not np.allclose(r, r.conj().T, atol=TOL):
        raise NotDensityMatrix("density matrix must be Hermitian")
    if abs(np.trace(r).real - 1) > TOL:
        raise NotDensityMatrix("density matrix must have unit trace")
    if np.min(np.linalg.eigvalsh(r)) < -TOL:
        raise NotDensityMatrix("density matrix must be positive semidefinite")
    return r


def projector(psi) -> np.ndarray:
    v = _state(psi)
    return np.outer(v, v.conj())


def density_evolution(rho0, U: UnitaryFamily, t: int) -> tuple:
    """``(U rho0 U^dagger, diagonal probabilities)``."""
    r = validate_density(rho0)
    u = U.at(t)
    if len(r) != len(u):
        raise DimensionMismatch("density matrix and unitary differ in dimension")
    rt = u @ r @ u.conj().T
    return rt, np.real(np.diag(rt)).copy()


_S = 1 / np.sqrt(2)
TOMOGRAPHIC_BASES = (
    ("z+", np.array([1, 0], dtype=complex)),
    ("z-", np.array([0, 1], dtype=complex)),
    ("x+", np.array([_S, _S], dtype=complex)),
    ("x-", np.array([_S, -_S], dtype=complex)),
    ("y+", np.array([_S, 1j * _S], dtype=complex)),
    ("y-", np.array([_S, -1j * _S], dtype=complex)),
)


def tomographic_vector(rho) -> np.ndarray:
    """Six Born probabilities ``(z+, z-, x+, x-, y+, y-)`` of a qubit state."""
    r = validate_density(rho)
    if r.shape != (2, 2):
        raise WrongDimension("the six-outcome vector is defined for qubits only")
    return np.array([np.real(np.vdot(v, r @ v)) for _, v in TOMOGRAPHIC_BASES])


def state_from_tomographic(v: Sequence[float]) -> np.ndarray:
    """Inverse of :func:`tomographic_vector` on valid six-vectors."""
    v = np.asarray(v, dtype=float)
    if v.shape != (6,):
        raise WrongDimension("expected six entries")
    z, x, y = v[0] - v[1], v[2] - v[3], v[4] - v[5]
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]], dtype=complex)


def tomographic_evolution(U: UnitaryFamily, t: int) -> Callable:
    """``v -> phi(U(t) phi^-1(v) U(t)^dagger)`` on six-vectors."""
    if U.dim != 2:
        raise WrongDimension("the six-outcome vector is defined for qubits only")
    u = U.at(t)

    def step(v):
        r = state_from_tomographic(v)
        return tomographic_vector(u @ r @ u.conj().T)

    return step


# unistochastic matrices and interference -------------------------------------

def schur_square(u) -> np.ndarray:
    m = np.asarray(u, dtype=complex)
    return np.real(m.conj() * m)


def unistochastic_of(u) -> np.ndarray:
    """Entrywise squared modulus of a unitary matrix (column-stochastic)."""
    return schur_square(_unitary(u))


@dataclass(frozen=True)
class DiscrepancyReport:
    t: int
    t_prime: int
    relative: np.ndarray  # U(t <- t')
    discrepancy: np.ndarray  # P(t) - SH(U(t <- t')) P(t')
    cross_terms: np.ndarray  # interference sum over k != l
    agrees: bool
    schur_relative: np.ndarray  # SH(U(t <- t'))
    decomposition: np.ndarray | None  # P(t) P(t')^-1, None when P(t') is singular
    commutes: bool | None  # whether SH(U(t <- t')) equals P(t) P(t')^-1
    singular: bool

    def require_diagram(self):
        if self.singular:
            raise SingularIntermediate(f"P({self.t_prime}) is not invertible")
        return self.decomposition


def interference_discrepancy(U: UnitaryFamily, t: int, t_prime: int, require_diagram: bool = False) -> DiscrepancyReport:
    """Compare ``P(t)`` with the would-be factorisation ``SH(U(t<-t')) P(t')``.

    The difference is returned together with its interference form
    ``D_ij = sum_{k != l} conj(R_ik v_k) R_il v_l`` where ``R = U(t<-t')`` and
    ``v = U(t') e_j``.  The report also records whether the Schur square of the
    relative unitary equals ``P(t) P(t')^-1``.
    """
    if t_prime > t:
        raise InvalidTime("need t' <= t")
    rel = U.relative(t, t_prime)
    pt, ptp = schur_square(U.at(t)), schur_square(U.at(t_prime))
    sh = schur_square(rel)
    disc = pt - sh @ ptp
    d = U.dim
    cross = np.zeros((d, d))
    for j in range(d):
        v = U.at(t_prime)[:, j]
        amp = rel * v[np.newaxis, :]  # amp[i, k] = R_ik v_k
        for i in range(d):
            row = amp[i]
            total = np.sum(np.conj(row)[:, None] * row[None, :]) - np.sum(np.abs(row) ** 2)
            cross[i, j] = np.real(total)
    agrees = bool(np.allclose(disc, cross, atol=TOL))
    singular = abs(np.linalg.det(ptp)) < TOL
    if singular:
        if require_diagram:
            raise SingularIntermediate(f"P({t_prime}) is not invertible")
        decomp, commutes = None, None
    else:
        decomp = pt @ np.linalg.inv(ptp)
        commutes = bool(np.allclose(decomp, sh, atol=TOL))
    return DiscrepancyReport(t, t_prime, rel, disc, cross, agrees, sh, decomp, commutes, singular)


def quantum_decomposition_check(U: UnitaryFamily, psi, t: int, t_prime: int) -> bool:
    """Born vector of ``U(t) psi`` equals that of ``U(t<-t') U(t') psi``."""
    if t_prime > t:
        raise InvalidTime("need t' <= t")
    v = _state(psi)
    direct = np.abs(U.at(t) @ v) ** 2
    staged = np.abs(U.relative(t, t_prime) @ (U.at(t_prime) @ v)) ** 2
    return bool(np.allclose(direct, staged, atol=TOL))


def quantum_probability_dynamics(U: UnitaryFamily, select_state: Callable):
    """Float-valued dynamics ``(t, p0) -> Born vector of U(t) select_state(p0)``.

    ``select_state`` must return a state whose Born vector is ``p0``; there is
    no default choice.
    """
    if select_state is None or not callable(select_state):
        raise PreconditionFailed("a state-selection function is required")

    def evaluate(t, p0):
        psi = _state(select_state(p0))
        if not np.allclose(np.abs(psi) ** 2, np.asarray(p0, dtype=float), atol=TOL):
            raise PreconditionFailed("selected state does not reproduce p0")
        return np.abs(U.at(t) @ psi) ** 2

    return evaluate
