"""
Shifts of finite type and their periodic orbits
===============================================

A shift of finite type is fixed by a zero-one matrix ``A``: the symbol
``b`` may follow ``a`` when ``A[a, b] = 1``. This script builds the full
2-shift and the golden-mean shift, checks exactness and lists periodic
orbits.
"""

import numpy as np

from gibbsolver import (admissible_words, entropy, full_shift, golden_mean_shift,
                        is_exact, periodic_orbits, validate_system)

###############################################################################
# Three systems: two exact ones and a period-2 permutation, which is
# irreducible but not primitive.

full = full_shift(2)
golden = golden_mean_shift()
flip = validate_system(2, [[0, 1], [1, 0]])

for name, sys in [("full 2-shift", full), ("golden mean", golden), ("flip", flip)]:
    print(f"{name:12s} exact={is_exact(sys)!s:5s} irreducible={sys.irreducible}")

###############################################################################
# Admissible words of length 4 on the golden-mean shift never contain "11".

words = admissible_words(golden, 4)
print(len(words), "words:", ["".join(map(str, w)) for w in words])

###############################################################################
# Periodic orbits come out one representative per orbit (the least
# rotation). Counting points, each orbit of period p contributes p points,
# and the total for period p must equal trace(A^p).

orbits = periodic_orbits(golden, 8)
for p in range(1, 9):
    points = sum(o.period for o in orbits if p % o.period == 0)
    trace = int(np.trace(np.linalg.matrix_power(golden.A, p)))
    print(f"p={p}: {points:3d} periodic points, trace(A^p) = {trace}")

print("orbits up to period 5:", [str(o) for o in orbits if o.period <= 5])

###############################################################################
# The entropy is the log of the spectral radius of ``A``.

print("h(full 2-shift) =", entropy(full), " log 2 =", np.log(2))
print("h(golden mean)  =", entropy(golden), " log golden ratio =", np.log((1 + 5 ** 0.5) / 2))
