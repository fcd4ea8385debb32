"""
Interference and the qubit six-vector
=====================================

Born probabilities of a superposition are not the mixture of the components'
probabilities once the unitary mixes the basis states.  The six Pauli-basis
probabilities of the density matrix, however, evolve linearly.
"""

import math
from pathlib import Path

import numpy as np

from stoqdyn.io import load_file
from stoqdyn.quantum import (
    UnitaryFamily,
    interference_discrepancy,
    projector,
    quantum_linearity_violation,
    rotation,
    tomographic_evolution,
    tomographic_vector,
)

s = 1 / math.sqrt(2)
e1, e2, psi = np.array([1.0, 0]), np.array([0, 1.0]), np.array([s, s])
U = load_file(Path(__file__).parent / "data" / "rotation_unitaries.json", "unitary")

for rec in quantum_linearity_violation(U, 0.5, e1, e2, psi):
    print(f"t={rec.t}: violation={rec.violation:.3f} cross terms={np.round(rec.cross_terms, 3)}")

v1, v2, vpsi = (tomographic_vector(projector(v)) for v in (e1, e2, psi))
print("v_|1>   =", np.round(v1, 3))
print("v_|psi> =", np.round(vpsi, 3))
step = tomographic_evolution(U, 1)
print("V_1 keeps the mixture:", np.allclose(step(0.5 * v1 + 0.5 * v2), 0.5 * step(v1) + 0.5 * step(v2)))

fam = UnitaryFamily((0, 1, 2), (np.eye(2), rotation(math.pi / 8), rotation(3 * math.pi / 8)))
rep = interference_discrepancy(fam, 2, 1)
print("P(2)P(1)^-1 =", np.round(rep.decomposition, 6).tolist())
print("SH(U(2)U(1)^-1) =", np.round(rep.schur_relative, 6).tolist())
print("D_11 =", round(rep.discrepancy[0, 0], 6), " cross-term form agrees:", rep.agrees)
