"""
Conformal measure on cylinder sets
==================================

The left Perron vector defines a measure ``mu`` on cylinders with
``lambda * mu[u] = exp(phi(u)) * mu[shifted u]``. This script computes
the masses of depth-4 cylinders and checks the identity directly.
"""

import math

from gibbsolver import (LocallyConstantPotential, build_transfer_matrix, cylinder_measure,
                        golden_mean_shift, rpf_eigendata)
from gibbsolver.potential import format_word

sys = golden_mean_shift()
phi = LocallyConstantPotential.letter_weights(sys, [0.3, -0.8])
rpf = rpf_eigendata(build_transfer_matrix(sys, phi))

###############################################################################
# Masses of the admissible words of length 4; they add up to one.

m4 = cylinder_measure(sys, phi, rpf, 4).masses
m3 = cylinder_measure(sys, phi, rpf, 3).masses
for u, x in m4.items():
    print(format_word(u), f"{x:.10f}")
print("total:", math.fsum(m4.values()))

###############################################################################
# Conformality, cylinder by cylinder.

worst = max(abs(rpf.lam * x - math.exp(phi.values[u[:1]]) * m3[u[1:]]) for u, x in m4.items())
print("largest deviation from lambda mu[u] = e^phi mu[su]:", worst)
