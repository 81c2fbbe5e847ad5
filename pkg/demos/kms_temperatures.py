"""
Inverse temperatures where the pressure vanishes
================================================

For a potential ``phi`` the candidates are the ``beta`` with
``P(T, -beta phi) = 0``. ``classify`` adds a periodic-orbit check and
reports which case of the existence and uniqueness theory applies.
"""

import math

from gibbsolver import (LocallyConstantPotential, classify, evans_solve, find_kms_beta,
                        full_shift, golden_mean_shift, zacharias_check)

full = full_shift(2)
golden = golden_mean_shift()

###############################################################################
# phi = 1: the root is the entropy.

rep = classify(full, LocallyConstantPotential.constant(full, 1.0))
print("phi = 1:", rep.roots, rep.verdict.value, "unique KMS:", rep.unique_kms)

###############################################################################
# Letter weights on the full shift: the root solves
# sum_j exp(-beta lambda_j) = 1, and a direct solver agrees.

lams = [1.0, 2.0]
rep = find_kms_beta(full, LocallyConstantPotential.letter_weights(full, lams))
print("weights (1, 2):", rep.roots[0], "direct:", evans_solve(lams))

###############################################################################
# On the golden-mean shift, diag(exp(-beta lambda)) A has spectral radius one
# at the root.

rep = find_kms_beta(golden, LocallyConstantPotential.letter_weights(golden, [1.0, 1.0]))
beta = rep.roots[0]
print("golden mean:", beta, "rho =", zacharias_check(golden, [1.0, 1.0], beta))

###############################################################################
# A mixed-sign potential with a root at beta = -1.

phi = LocallyConstantPotential.from_function(
    full, 2, lambda w: math.log(4 / 3) if w == (0, 1) else -math.log(3))
rep = classify(full, phi)
print("depth-2 example:", rep.roots, rep.verdict.value, "unique KMS:", rep.unique_kms)

###############################################################################
# Weights (1, -1): the orbit {01} has Birkhoff sum zero, so the pressure
# stays positive and there is no root.

rep = classify(full, LocallyConstantPotential.letter_weights(full, [1.0, -1.0]))
print("weights (1, -1):", rep.verdict.value, "first witnesses:",
      [str(o) for o, _ in rep.violations[:3]])
print("lowest sampled pressure:", min(p for _, p in rep.pressure_curve))
