"""
Decomposable but not divisible
==============================

Two column-stochastic matrices with P(2) P(1)^-1 not stochastic.  The LP is
solved in exact rationals, so the refusal comes with a Farkas certificate that
can be checked by hand.  A rotation-derived family shows the opposite case.
"""

from fractions import Fraction as F

from stoqdyn.dynamics import MatrixFamily, decomposing_map_matrix, is_decomposable, is_divisible, verify_certificate
from stoqdyn.fixtures import rotation_family_exact
from stoqdyn.io import jsonable, matrix_rows_text
from stoqdyn.simplex import identity

H = F(1, 2)
fam = MatrixFamily((0, 1, 2), (identity(2), ((1, H), (0, H)), ((H, 1), (H, 0))))

print("decomposable:", is_decomposable(fam).holds)
print("candidate P(2)P(1)^-1 =", matrix_rows_text(decomposing_map_matrix(fam, 2, 1)))

report = is_divisible(fam)
for pair, result in report.pairs.items():
    print(pair, result.status)
cert = report.pairs[(1, 2)].certificate
print("certificate:", jsonable(cert))
print("certificate verifies:", verify_certificate(fam.at(1), fam.at(2), cert))

# cos^2(pi/8) = 1/2 + sqrt(2)/4 is kept exact
rot = rotation_family_exact()
print("rotation P(1) =", matrix_rows_text(rot.at(1)))
print("rotation factor:", matrix_rows_text(is_divisible(rot).pairs[(1, 2)].factor))
