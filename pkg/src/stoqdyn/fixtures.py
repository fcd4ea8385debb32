"""Registry of worked examples, each runnable as a regression check.

A fixture builds its inputs, runs the relevant decision procedures and
constructors, and compares every result with the expected value.  Exact
quantities are compared with ``==``; quantum quantities within ``TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .dynamics import (
    DIVISIBLE,
    NOT_DIVISIBLE,
    MatrixFamily,
    ProbabilityDynamics,
    decomposing_map_matrix,
    evaluate,
    is_decomposable,
    is_divisible,
    is_linear,
    verify_certificate,
)
from .errors import UnknownFixture
from .implementation import (
    family_dynamics,
    family_implements,
    finite_inner_representation,
    is_transition_constant,
    markov_product_family,
    transition_constant_family,
)
from .io import matrix_rows_text
from .measure import conditional, is_markovian, joint_probability, marginal_vector, transition_matrix
from .quantum import (
    UnitaryFamily,
    born_trajectory,
    density_evolution,
    interference_discrepancy,
    projector,
    quantum_decomposition_check,
    quantum_linearity_violation,
    rotation,
    tomographic_evolution,
    tomographic_vector,
    unistochastic_of,
)
from .scalar import TOL, UNDEFINED, QuadSurd
from .statistical import (
    DeterministicSystem,
    SystemAncilla,
    ancilla_family_independent,
    ancilla_matrix_family,
    derive_stochastic_from_ancilla,
    deterministic_family,
    deterministic_matrix_family,
    is_decomposable_deterministic,
    realize_family_as_ancilla,
    realize_stochastic_as_ancilla,
    reconstruct_family,
    stochastic_matrix_family,
)

F = Fraction
HALF = F(1, 2)
FLIP = ((F(0), F(1)), (F(1), F(0)))
ID2 = ((F(1), F(0)), (F(0), F(1)))
EX2_P1 = ((F(1), HALF), (F(0), HALF))
EX2_P2 = ((HALF, F(1)), (HALF, F(0)))
COS2_PI8 = QuadSurd(HALF, F(1, 4), 2)  # 1/2 + sqrt(2)/4
SIN2_PI8 = QuadSurd(HALF, F(-1, 4), 2)  # 1/2 - sqrt(2)/4


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object
    ok: bool


def _exact(name, expected, actual) -> Check:
    return Check(name, expected, actual, bool(expected == actual))


def _close(name, expected, actual, tol: float = TOL) -> Check:
    ok = bool(np.allclose(np.asarray(actual, dtype=float), np.asarray(expected, dtype=float), atol=tol, rtol=0))
    return Check(name, expected, actual, ok)


def _flag(name, actual: bool, expected: bool = True) -> Check:
    return Check(name, expected, bool(actual), bool(actual) == expected)


@dataclass(frozen=True)
class Fixture:
    id: str
    title: str
    run: Callable[[], tuple]  # -> (checks, summary)

    def report(self) -> dict:
        checks, summary = self.run()
        return {
            "id": self.id,
            "title": self.title,
            "summary": summary,
            "ok": all(c.ok for c in checks),
            "checks": [{"name": c.name, "expected": c.expected, "actual": c.actual, "ok": c.ok} for c in checks],
        }


# inputs ------------------------------------------------------------------------

def coin_dynamics(f: Callable = lambda r: r * r) -> ProbabilityDynamics:
    """Coin bias ``r`` at times 0 and 2, ``f(r)`` at time 1."""

    def fn(t, p):
        if t == 1:
            return (f(p[0]), 1 - f(p[0]))
        return tuple(p)

    return ProbabilityDynamics.from_function((0, 1, 2), 2, fn)


def flip_family() -> MatrixFamily:
    return MatrixFamily((0, 1), (ID2, FLIP))


def nondivisible_family() -> MatrixFamily:
    return MatrixFamily((0, 1, 2), (ID2, EX2_P1, EX2_P2))


def rotation_family_exact() -> MatrixFamily:
    p1 = ((COS2_PI8, SIN2_PI8), (SIN2_PI8, COS2_PI8))
    p2 = ((SIN2_PI8, COS2_PI8), (COS2_PI8, SIN2_PI8))  # cos^2(3pi/8) = sin^2(pi/8)
    return MatrixFamily((0, 1, 2), (ID2, p1, p2))


def rotation_unitaries() -> UnitaryFamily:
    return UnitaryFamily((0, 1, 2), (np.eye(2, dtype=complex), rotation(math.pi / 8), rotation(3 * math.pi / 8)))


def two_ancilla_system() -> tuple:
    """System-ancilla table with two ancilla states and a uniform ancilla distribution."""
    out = {
        (1, 1, 1): 1, (1, 1, 2): 1, (1, 2, 1): 1, (1, 2, 2): 2,
        (2, 1, 1): 1, (2, 1, 2): 2, (2, 2, 1): 1, (2, 2, 2): 1,
    }
    table = {(0, i, a): i for i in (1, 2) for a in (1, 2)}
    table.update(out)
    return SystemAncilla((0, 1, 2), 2, 2, table), (HALF, HALF)


def constant_coins() -> DeterministicSystem:
    return DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 2], [1, 2]])


# runs --------------------------------------------------------------------------

def _run_intro_coin():
    dyn = coin_dynamics()
    lin = is_linear(dyn)
    w = lin.witness or {}
    fam = markov_product_family(dyn)
    mu = fam.member((HALF, HALF))
    m21 = {p: transition_matrix(fam.member(p), 2, 1) for p in [(HALF, HALF), (F(1, 3), F(2, 3))]}
    checks = [
        _flag("f(r)=r^2 is linear", lin.holds, False),
        _exact("witness time", 1, w.get("t")),
        _exact("P_1(1/2,1/2)", (F(1, 4), F(3, 4)), w.get("value")),
        _exact("mixture of vertex images", (HALF, HALF), w.get("mixture")),
        _flag("f(r)=r is linear", is_linear(coin_dynamics(lambda r: r)).holds),
        _flag("product family implements the dynamics", family_implements(fam, dyn)),
        _exact("mu_1/2(HHH)", F(1, 16), mu[(1, 1, 1)]),
        _exact("mu_1/2(TTT)", F(3, 16), mu[(2, 2, 2)]),
        _flag("members are Markovian", all(is_markovian(m).holds for m in fam.members.values())),
        _flag("conditional matrices depend on r", m21[(HALF, HALF)] != m21[(F(1, 3), F(2, 3))]),
        _flag("family is transition-constant", is_transition_constant(fam).holds, False),
        _flag("dynamics is decomposable", is_decomposable(dyn).holds),
    ]
    inner = finite_inner_representation(fam, [((F(1), F(0)), HALF), ((F(0), F(1)), HALF)])
    checks.append(_exact("conditioning the inner representation recovers members",
                         (fam.member((F(1), F(0))), fam.member((F(0), F(1)))),
                         (inner.conditional_member(0), inner.conditional_member(1))))
    return checks, "nonlinear: P_1(1/2,1/2) = (1/4,3/4) != (1/2,1/2)"


def _run_example_1_flip():
    fam = flip_family()
    p0 = (F(1, 3), F(2, 3))
    prod = markov_product_family(fam, extra=[p0])
    m_p0 = transition_matrix(prod.member(p0), 1, 0)
    vertex_m = transition_matrix(prod.member((F(1), F(0))), 1, 0)
    tc = transition_constant_family(fam)
    tcv = is_transition_constant(tc)
    checks = [
        _exact("flip of (1/3,2/3)", (F(2, 3), F(1, 3)), evaluate(fam, 1, p0)),
        _flag("product family implements the flip", family_implements(prod, fam)),
        _exact("M_p0(1<-0) at p0=1/3", ((F(2, 3), F(2, 3)), (F(1, 3), F(1, 3))), m_p0),
        _flag("M_p0 differs from P for every tabulated p0",
              all(transition_matrix(mu, 1, 0) != FLIP for mu in prod.members.values())),
        _exact("undefined column at p0=(1,0)", (UNDEFINED, UNDEFINED), (vertex_m[0][1], vertex_m[1][1])),
        _flag("product family is transition-constant", is_transition_constant(prod).holds, False),
        _flag("transition-constant family is transition-constant", tcv.holds),
        _exact("common conditional matrices", fam, tcv.data),
        _exact("mu([1,2]) at p0=1/2", HALF, tc.member((HALF, HALF))[(1, 2)]),
    ]
    return checks, "M_p0(t) = [[1-p0,1-p0],[p0,p0]] != P(t) = [[0,1],[1,0]]"


def _run_example_2():
    fam = nondivisible_family()
    dec = is_decomposable(fam)
    cand = decomposing_map_matrix(fam, 2, 1)
    rep = is_divisible(fam)
    pair = rep.pairs[(1, 2)]
    expected = ((HALF, F(3, 2)), (HALF, F(-1, 2)))
    checks = [
        _flag("decomposable", dec.holds),
        _exact("candidate P(2)P(1)^-1", expected, cand),
        _flag("divisible", rep.divisible, False),
        _exact("pair (1,2)", NOT_DIVISIBLE, pair.status),
        _flag("Farkas certificate verifies", pair.certificate is not None
              and verify_certificate(fam.at(1), fam.at(2), pair.certificate)),
        _exact("pair (0,1)", DIVISIBLE, rep.pairs[(0, 1)].status),
        _exact("pair (0,2)", DIVISIBLE, rep.pairs[(0, 2)].status),
    ]
    return checks, f"NOT_DIVISIBLE, candidate {matrix_rows_text(cand)} rejected"


def _run_rotation():
    fam = rotation_family_exact()
    cand = decomposing_map_matrix(fam, 2, 1)
    rep = is_divisible(fam)
    pair = rep.pairs[(1, 2)]
    U = rotation_unitaries()
    disc = interference_discrepancy(U, 2, 1)
    s2 = math.sin(math.pi / 8) ** 2
    checks = [
        _exact("P(2)P(1)^-1", FLIP, cand),
        _exact("pair (1,2)", DIVISIBLE, pair.status),
        _exact("stochastic factor", FLIP, pair.factor),
        _close("P(1) is the Schur square of U(1)", [[float(x) for x in r] for r in fam.at(1)], unistochastic_of(U.at(1))),
        _close("P(2) is the Schur square of U(2)", [[float(x) for x in r] for r in fam.at(2)], unistochastic_of(U.at(2))),
        _close("SH(U(2)U(1)^-1)", [[0.5, 0.5], [0.5, 0.5]], disc.schur_relative),
        _close("D_11", s2 - 0.5, disc.discrepancy[0, 0]),
        _close("D_11 = -sqrt(2)/4", -math.sqrt(2) / 4, disc.discrepancy[0, 0]),
        _flag("cross-term form agrees", disc.agrees),
        _flag("SH(U(2<-1)) equals P(2)P(1)^-1", disc.commutes, False),
    ]
    sh = "[[1/2,1/2],[1/2,1/2]]"
    return checks, f"DIVISIBLE with {matrix_rows_text(pair.factor)}; SH-square mismatch {sh}"


def _run_sec54():
    SA, lam = two_ancilla_system()
    P = nondivisible_family()
    S = derive_stochastic_from_ancilla(SA, lam)
    fam = ancilla_family_independent(SA, lam)
    p0 = (HALF, HALF)
    mu = fam.member(p0)
    sa2, lam2 = realize_stochastic_as_ancilla(S)
    back = derive_stochastic_from_ancilla(sa2, lam2)
    fsa, initials = realize_family_as_ancilla(fam)
    rebuilt = reconstruct_family(fsa, initials)
    checks = [
        _exact("M^SA(t) = P(t)", P, ancilla_matrix_family(SA, lam)),
        _exact("M^S(t) = P(t)", P, stochastic_matrix_family(S)),
        _exact("mu_1^S support", {(1, 1, 1): HALF, (1, 1, 2): HALF}, S.processes[0].support()),
        _exact("mu_2^S support", {(2, 1, 1): HALF, (2, 2, 1): HALF}, S.processes[1].support()),
        _flag("induced dynamics decomposable", is_decomposable(P).holds),
        _flag("induced dynamics divisible", is_divisible(P).divisible, False),
        _flag("family implements P", family_implements(fam, P)),
        _exact("mu(E1(2) | E1(1), E1(0))", HALF, conditional(mu, [(2, 1)], [(1, 1), (0, 1)])),
        _exact("mu(E1(2) | E1(1), E2(0))", F(1), conditional(mu, [(2, 1)], [(1, 1), (0, 2)])),
        _flag("interior members non-Markovian",
              all(not is_markovian(m).holds for p, m in fam.members.items() if all(x > 0 for x in p))),
        _flag("block ancilla reproduces each mu_i^S", back.processes == S.processes),
        _exact("block ancilla size", 16, sa2.m),
        _flag("trajectory ancilla reproduces every member", rebuilt == dict(fam.members)),
    ]
    return checks, "decomposable, not divisible; members non-Markovian (conditionals 1/2 and 1)"


def _run_qubit():
    U = UnitaryFamily((0, 1), (np.eye(2, dtype=complex), rotation(math.pi / 4)))
    s = 1 / math.sqrt(2)
    psi, e1, e2 = np.array([s, s]), np.array([1, 0]), np.array([0, 1])
    viol = quantum_linearity_violation(U, 0.5, e1, e2, psi)
    v1, v2, vpsi = (tomographic_vector(projector(v)) for v in (e1, e2, psi))
    mixed = 0.5 * v1 + 0.5 * v2
    step = tomographic_evolution(U, 1)
    rho_mixed = np.diag([0.5, 0.5]).astype(complex)
    checks = [
        _close("p_psi(1)", [0.0, 1.0], born_trajectory(psi, U)[1]),
        _close("violation at t=1", 0.5, viol[1].violation),
        _close("violation at t=0", 0.0, viol[0].violation),
        _flag("cross terms account for the violation", all(r.agrees for r in viol)),
        _close("v_|1>", [1, 0, 0.5, 0.5, 0.5, 0.5], v1, 1e-12),
        _close("v_|2>", [0, 1, 0.5, 0.5, 0.5, 0.5], v2, 1e-12),
        _close("v_|psi>", [0.5, 0.5, 1, 0, 0.5, 0.5], vpsi, 1e-12),
        _close("upper blocks agree", mixed[:2], vpsi[:2], 1e-12),
        _flag("whole vectors differ", not np.allclose(mixed, vpsi, atol=1e-12)),
        _close("V_t preserves the mixture", 0.5 * step(v1) + 0.5 * step(v2), step(mixed)),
        _flag("V_t(v_psi) differs from the mixed image", not np.allclose(step(vpsi), step(mixed), atol=TOL)),
        _close("|psi><psi|", [[0.5, 0.5], [0.5, 0.5]], np.real(projector(psi))),
        _close("maximally mixed diagonal is invariant", [0.5, 0.5], density_evolution(rho_mixed, U, 1)[1]),
        _flag("decomposition of the Born trajectory", quantum_decomposition_check(U, psi, 1, 0)),
    ]
    return checks, "p_psi(1) = (0,1) vs mixture (1/2,1/2): violation 1/2"


def _run_mixing():
    D = constant_coins()
    coin = coin_dynamics()
    fam = deterministic_family(D)
    ens = family_dynamics(fam)
    p = (HALF, HALF)
    checks = [
        _exact("D dynamics is the identity", MatrixFamily((0, 1, 2), (ID2, ID2, ID2)), deterministic_matrix_family(D)),
        _exact("P^D_1(1/2,1/2)", p, evaluate(ens, 1, p)),
        _exact("P_1(1/2,1/2) for the single coin", (F(1, 4), F(3, 4)), evaluate(coin, 1, p)),
        _flag("agree at the vertices", all(evaluate(ens, t, v) == evaluate(coin, t, v)
                                           for t in (0, 1, 2) for v in [(F(1), F(0)), (F(0), F(1))])),
        _flag("ensemble dynamics linear", is_linear(ens).holds),
        _flag("single-coin dynamics linear", is_linear(coin).holds, False),
        _flag("D decomposable", is_decomposable_deterministic(D).holds),
        _flag("all members Markovian", all(is_markovian(m).holds for m in fam.members.values())),
        _exact("member at (1,0)", {(1, 1, 1): F(1)}, fam.member((F(1), F(0))).support()),
        _exact("heads fraction stays 1/2", [HALF] * 3,
               [joint_probability(fam.member(p), [(t, 1)]) for t in (0, 1, 2)]),
        _exact("marginal at t=2", p, marginal_vector(fam.member(p), 2)),
    ]
    return checks, "ensemble P^D_1(1/2,1/2) = (1/2,1/2) != (1/4,3/4) = P_1(1/2,1/2)"


FIXTURES = {
    f.id: f
    for f in (
        Fixture("intro-coin", "coin with moving weight, f(r) = r^2", _run_intro_coin),
        Fixture("example-1-flip", "flip dynamics and a family with p0-dependent conditionals", _run_example_1_flip),
        Fixture("example-2-nondivisible", "decomposable but not divisible linear dynamics", _run_example_2),
        Fixture("appendix-c-rotation", "unistochastic rotation family and interference discrepancy", _run_rotation),
        Fixture("sec54-ancilla", "two-state ancilla realizing the non-divisible dynamics", _run_sec54),
        Fixture("qubit-interference", "Born-rule nonlinearity and tomographic linearity", _run_qubit),
        Fixture("example-3-mixing", "ensemble of maximally biased coins vs a single coin", _run_mixing),
    )
}


def get(fixture_id: str) -> Fixture:
    try:
        return FIXTURES[fixture_id]
    except KeyError:
        raise UnknownFixture(f"unknown fixture {fixture_id!r}; choose from {sorted(FIXTURES)}") from None
