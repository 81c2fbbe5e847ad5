"""
Topological pressure of a locally constant potential
====================================================

The pressure ``P(T, phi)`` is the log of the leading eigenvalue of the
transfer operator. For a potential depending on two symbols the operator
acts on functions of one symbol, so it is a small matrix.
"""

import math

import numpy as np

from gibbsolver import (LocallyConstantPotential, build_transfer_matrix, full_shift,
                        pressure, pressure_sandwich, rpf_eigendata)

sys = full_shift(2)

###############################################################################
# A depth-2 potential: log(4/3) on the cylinder 01 and -log 3 everywhere else.

phi = LocallyConstantPotential.from_function(
    sys, 2, lambda w: math.log(4 / 3) if w == (0, 1) else -math.log(3))
T = build_transfer_matrix(sys, phi)
print("cylinders:", T.index)
print(T.entries)

###############################################################################
# Perron data: eigenvalue, right eigenvector and left eigenvector
# normalised to total mass one.

rpf = rpf_eigendata(T)
print("lambda =", rpf.lam, " P =", rpf.log_lambda)
print("h  =", rpf.h)
print("nu =", rpf.nu, " residuals:", rpf.right_residual, rpf.left_residual)

###############################################################################
# The n-th roots of ``L^n 1`` squeeze the pressure from both sides as n grows.

for n in (1, 2, 4, 8, 12):
    lo, hi = pressure_sandwich(sys, phi, n)
    print(f"n={n:2d}: {lo:+.10f} <= P <= {hi:+.10f}")

###############################################################################
# ``beta -> P(T, -beta phi)`` is convex. For this potential it is also
# increasing and crosses zero at beta = -1.

for beta in np.linspace(-3, 1, 9):
    print(f"beta={beta:+.2f}  P={pressure(sys, phi * -beta):+.12f}")
