"""
When does a probability dynamics preserve mixtures?
===================================================

A coin whose heads weight r moves to f(r) after one toss and back to r after
the next.  With f(r) = r the map is linear; with f(r) = r**2 it is not, and the
checker returns the point where mixing and evolving fail to commute.
"""

from fractions import Fraction

from stoqdyn.dynamics import ProbabilityDynamics, is_decomposable, is_linear
from stoqdyn.implementation import family_implements, markov_product_family
from stoqdyn.io import jsonable, matrix_rows_text
from stoqdyn.measure import is_markovian


def coin(f):
    def step(t, p):
        r = p[0]
        x = f(r) if t == 1 else r
        return (x, 1 - x)
    return ProbabilityDynamics.from_function((0, 1, 2), 2, step)


# f(r) = r squared breaks convex-combination preservation
squared = coin(lambda r: r * r)
verdict = is_linear(squared)
print("f(r)=r^2 linear:", verdict.holds)
print("  witness:", jsonable(verdict.witness))

# the identity update is linear; the checker also hands back the matrices
identity = coin(lambda r: r)
print("f(r)=r linear:", is_linear(identity).holds)
print("  P(1) =", matrix_rows_text(is_linear(identity).data.at(1)))

# a nonlinear dynamics can still be decomposable, and still be implemented
fam = markov_product_family(squared)
print("decomposable:", is_decomposable(squared).holds)
print("product family implements it:", family_implements(fam, squared))
mu = fam.member((Fraction(1, 2), Fraction(1, 2)))
print("mu_1/2(HHH) =", mu[(1, 1, 1)], " Markovian:", is_markovian(mu).holds)
