"""
Pressure for the doubling map on the circle
===========================================

For ``x -> 2x mod 1`` and a smooth potential the transfer operator is
discretised on a uniform grid with periodic linear interpolation. The
error estimate compares each grid with the one of half the size.
"""

import math

from gibbsolver import CircleSystem, GridPotential, circle_pressure

sys = CircleSystem(2)

###############################################################################
# With the zero potential every grid gives exactly log 2.

for m in (8, 64, 512):
    P, err = circle_pressure(sys, GridPotential.constant(0.0, m))
    print(f"m={m:4d}  P={P:.15f}  log 2={math.log(2):.15f}")

###############################################################################
# A cosine potential: the estimate shrinks by about four with each doubling,
# which is second-order convergence.

for m in (64, 128, 256, 512, 1024, 2048):
    P, err = circle_pressure(sys, GridPotential.cosine(0.1, m))
    print(f"m={m:4d}  P={P:.12f}  err~{err:.2e}")
