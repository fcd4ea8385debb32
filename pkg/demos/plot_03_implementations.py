"""
Processes that implement a trajectory
=====================================

A trajectory of probability vectors has many processes with those one-time
marginals.  The product measure is always Markovian; when the trajectory has
interior entries at two times around a third, a perturbed measure is not.
"""

from fractions import Fraction as F

from stoqdyn.dynamics import MatrixFamily
from stoqdyn.errors import DegenerateTrajectory
from stoqdyn.implementation import (
    implements,
    is_transition_constant,
    markov_implementation,
    markov_product_family,
    non_markov_implementation,
    transition_constant_family,
)
from stoqdyn.io import jsonable
from stoqdyn.measure import is_markovian
from stoqdyn.simplex import identity

H = F(1, 2)
traj = [(H, H), (F(1, 4), F(3, 4)), (H, H)]

mk = markov_implementation(traj)
nm = non_markov_implementation(traj)
for name, mu in [("product", mk), ("perturbed", nm)]:
    print(f"{name:>9}: implements={implements(mu, traj)} markovian={is_markovian(mu).holds}")
print("Markov violation:", jsonable(is_markovian(nm).witness))

try:
    non_markov_implementation([(1, 0), (0, 1), (1, 0)])
except DegenerateTrajectory as exc:
    print("vertex trajectory:", exc)

# flipping dynamics: product members see conditionals that depend on p0,
# the transition-constant family sees the flip itself
flip = MatrixFamily((0, 1), (identity(2), ((0, 1), (1, 0))))
print("product family transition-constant:", is_transition_constant(markov_product_family(flip)).holds)
tc = is_transition_constant(transition_constant_family(flip))
print("transition-constant family recovers P:", tc.data == flip)
