"""Transfer operators of the expanding circle maps ``x -> n x (mod 1)``.

The operator is collocated on the uniform grid ``x_i = i/m``. Each grid point
has the ``n`` preimages ``(x_i + j)/n``; the potential and the test function
are read there by periodic linear interpolation, so every row has at most
``2n`` nonzeros and constant functions are reproduced exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .errors import GibbsError, InvalidSystemError
from .transfer import DEFAULT_MAX_ITER, DEFAULT_TOL, rpf_eigendata


@dataclass(frozen=True)
class CircleSystem:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidSystemError(f"circle: expansion degree must be an integer >= 2, got {self.n}")


class GridPotential:
    """Samples ``phi(i/m)`` of a potential on the circle."""

    def __init__(self, samples):
        samples = np.array(samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise GibbsError("circle: need at least two potential samples")
        if not np.isfinite(samples).all():
            raise GibbsError("circle: potential samples must be finite")
        samples.setflags(write=False)
        self.samples = samples

    @property
    def m(self) -> int:
        return self.samples.size

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], m: int) -> "GridPotential":
        return cls(f(np.arange(m) / m))

    @classmethod
    def constant(cls, c: float, m: int) -> "GridPotential":
        return cls(np.full(m, float(c)))

    @classmethod
    def cosine(cls, amplitude: float, m: int) -> "GridPotential":
        return cls.from_function(lambda x: amplitude * np.cos(2 * np.pi * x), m)

    def coarsen(self) -> "GridPotential":
        """Samples on the grid of half the size (``m`` must be even)."""
        if self.m % 2:
            raise GibbsError(f"circle: cannot halve an odd grid of size {self.m}")
        return GridPotential(self.samples[::2])

    def __add__(self, c: float) -> "GridPotential":
        return GridPotential(self.samples + float(c))

    def __mul__(self, c: float) -> "GridPotential":
        return GridPotential(self.samples * float(c))

    __rmul__ = __mul__


def build_circle_operator(sys: CircleSystem, phi: GridPotential) -> sp.csr_matrix:
    """Collocation matrix of the transfer operator of ``x -> n x`` on ``m`` grid points."""
    n, m = sys.n, phi.m
    if m < 2 * n:
        raise GibbsError(f"circle: grid size {m} is below 2n = {2 * n}")
    i = np.repeat(np.arange(m), n)
    j = np.tile(np.arange(n), m)
    # preimage (i/m + j)/n sits at grid coordinate (i + j m)/n, kept exact in integers
    num = i + j * m
    left = num // n
    frac = (num % n) / n
    right = (left + 1) % m
    s = phi.samples
    weight = np.exp((1 - frac) * s[left] + frac * s[right])
    rows = np.concatenate([i, i])
    cols = np.concatenate([left, right])
    vals = np.concatenate([weight * (1 - frac), weight * frac])
    return sp.csr_matrix((vals, (rows, cols)), shape=(m, m))


def _log_perron(sys: CircleSystem, phi: GridPotential, tol: float, max_iter: int) -> float:
    top = float(phi.samples.max())
    rpf = rpf_eigendata(build_circle_operator(sys, phi + (-top)), tol, max_iter)
    return math.log(rpf.lam) + top


def circle_pressure(sys: CircleSystem, phi: GridPotential, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> tuple[float, float]:
    """Pressure of ``phi`` and the change from the half-size grid.

    The error estimate is ``inf`` when the grid cannot be halved (odd size
    or half size below ``2n``).
    """
    P = _log_perron(sys, phi, tol, max_iter)
    if phi.m % 2 or phi.m // 2 < 2 * sys.n:
        return P, math.inf
    return P, abs(P - _log_perron(sys, phi.coarsen(), tol, max_iter))
