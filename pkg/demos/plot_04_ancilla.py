"""
Hidden ancillas behind a non-divisible family
=============================================

A two-state system coupled to a two-state ancilla.  Averaging over a uniform
ancilla gives the decomposable, non-divisible family of the divisibility demo;
the resulting processes remember the initial configuration, so they are not
Markovian.  Realizations go back and forth between processes and ancillas.
"""

from fractions import Fraction as F

from stoqdyn.dynamics import is_decomposable, is_divisible
from stoqdyn.io import matrix_rows_text
from stoqdyn.measure import conditional, is_markovian
from stoqdyn.statistical import (
    SystemAncilla,
    ancilla_family_independent,
    ancilla_matrix_family,
    derive_stochastic_from_ancilla,
    realize_family_as_ancilla,
    realize_stochastic_as_ancilla,
    reconstruct_family,
)

H = F(1, 2)
# SA(t, i, alpha) for t = 1, 2; at t = 0 every pair sits at i
moves = {
    (1, 1, 1): 1, (1, 1, 2): 1, (1, 2, 1): 1, (1, 2, 2): 2,
    (2, 1, 1): 1, (2, 1, 2): 2, (2, 2, 1): 1, (2, 2, 2): 1,
}
table = {(0, i, a): i for i in (1, 2) for a in (1, 2)}
table.update(moves)
SA = SystemAncilla((0, 1, 2), 2, 2, table)
lam = (H, H)

P = ancilla_matrix_family(SA, lam)
print("P(1) =", matrix_rows_text(P.at(1)), " P(2) =", matrix_rows_text(P.at(2)))
print("decomposable:", is_decomposable(P).holds, " divisible:", is_divisible(P).divisible)

fam = ancilla_family_independent(SA, lam)
mu = fam.member((H, H))
print("P(E1(2) | E1(1), E1(0)) =", conditional(mu, [(2, 1)], [(1, 1), (0, 1)]))
print("P(E1(2) | E1(1), E2(0)) =", conditional(mu, [(2, 1)], [(1, 1), (0, 2)]))
print("Markovian:", is_markovian(mu).holds)

S = derive_stochastic_from_ancilla(SA, lam)
block, lam_block = realize_stochastic_as_ancilla(S)
print("block ancilla size:", block.m, " rebuilds S:", derive_stochastic_from_ancilla(block, lam_block).processes == S.processes)
traj_sa, initials = realize_family_as_ancilla(fam)
print("trajectory ancilla size:", traj_sa.m, " rebuilds family:", reconstruct_family(traj_sa, initials) == dict(fam.members))
