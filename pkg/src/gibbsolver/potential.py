"""Locally constant potentials on a subshift of finite type."""
from __future__ import annotations

import math
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InvalidPotentialError
from .symbolic import PeriodicOrbit, ShiftSystem, admissible_words


class LocallyConstantPotential:
    """A real function of the first ``depth`` symbols of a point.

    Parameters
    ----------
    system : ShiftSystem
        The shift the potential lives on.
    depth : int
        Number of leading symbols the value depends on.
    values : mapping
        Value for every admissible word of length ``depth``; no other keys.

    Potentials add (aligning depths), scale by reals and accept a real
    shift through ``phi + c``. They are immutable.
    """

    __slots__ = ("system", "depth", "values", "min_value", "max_value")

    def __init__(self, system: ShiftSystem, depth: int, values: Mapping[tuple, float]):
        if int(depth) != depth or depth < 1:
            raise InvalidPotentialError(f"potential: depth must be an integer >= 1, got {depth}")
        depth = int(depth)
        words = admissible_words(system, depth)
        table = {}
        for key, val in values.items():
            w = tuple(int(s) for s in key)
            if len(w) != depth or not system.is_admissible(w):
                raise InvalidPotentialError(
                    f"potential: word {format_word(w)} is not an admissible word of length {depth}")
            val = float(val)
            if not math.isfinite(val):
                raise InvalidPotentialError(f"potential: value on {format_word(w)} is not finite")
            table[w] = val
        missing = [w for w in words if w not in table]
        if missing:
            raise InvalidPotentialError(f"potential: no value for word {format_word(missing[0])}")
        ordered = {w: table[w] for w in words}
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "values", MappingProxyType(ordered))
        object.__setattr__(self, "min_value", min(ordered.values()))
        object.__setattr__(self, "max_value", max(ordered.values()))

    def __setattr__(self, name, value):
        raise AttributeError("LocallyConstantPotential is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, system: ShiftSystem, c: float) -> "LocallyConstantPotential":
        return cls(system, 1, {(a,): c for a in range(system.n)})

    @classmethod
    def letter_weights(cls, system: ShiftSystem, weights: Sequence[float]) -> "LocallyConstantPotential":
        """Depth-one potential ``phi(x) = weights[x_0]``."""
        if len(weights) != system.n:
            raise InvalidPotentialError(
                f"potential: expected {system.n} letter weights, got {len(weights)}")
        return cls(system, 1, {(a,): weights[a] for a in range(system.n)})

    @classmethod
    def from_function(cls, system: ShiftSystem, depth: int,
                      f: Callable[[tuple], float]) -> "LocallyConstantPotential":
        return cls(system, depth, {w: f(w) for w in admissible_words(system, depth)})

    def extend_to(self, depth: int) -> "LocallyConstantPotential":
        """The same function written as a table on longer words."""
        if depth < self.depth:
            raise InvalidPotentialError(
                f"potential: cannot shrink depth {self.depth} to {depth}")
        if depth == self.depth:
            return self
        k = self.depth
        return LocallyConstantPotential.from_function(
            self.system, depth, lambda w: self.values[w[:k]])

    # -- arithmetic -------------------------------------------------------

    def _map(self, f: Callable[[float], float]) -> "LocallyConstantPotential":
        return LocallyConstantPotential(self.system, self.depth,
                                        {w: f(v) for w, v in self.values.items()})

    def __add__(self, other):
        if isinstance(other, LocallyConstantPotential):
            if other.system is not self.system and not np.array_equal(other.system.A, self.system.A):
                raise InvalidPotentialError("potential: cannot add potentials on different systems")
            k = max(self.depth, other.depth)
            a, b = self.extend_to(k), other.extend_to(k)
            return LocallyConstantPotential(self.system, k,
                                            {w: a.values[w] + b.values[w] for w in a.values})
        c = float(other)
        return self._map(lambda v: v + c)

    __radd__ = __add__

    def __mul__(self, c):
        c = float(c)
        return self._map(lambda v: c * v)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self) -> str:
        return (f"LocallyConstantPotential(depth={self.depth}, words={len(self.values)}, "
                f"range=[{self.min_value:.6g}, {self.max_value:.6g}])")

    # -- evaluation -------------------------------------------------------

    def evaluate(self, w: Sequence[int]) -> float:
        """Value on the cylinder ``[w]``; ``w`` must be admissible and at least ``depth`` long."""
        w = tuple(w)
        if len(w) < self.depth:
            raise InvalidPotentialError(
                f"potential: word {format_word(w)} is shorter than depth {self.depth}")
        if not self.system.is_admissible(w):
            raise InvalidPotentialError(f"potential: word {format_word(w)} is not admissible")
        return self.values[w[:self.depth]]

    def birkhoff_sum(self, orbit: PeriodicOrbit) -> float:
        """``phi(x) + phi(Tx) + ... + phi(T^(p-1) x)`` for ``x`` the periodic point of ``orbit``."""
        w, p, k = orbit.representative, orbit.period, self.depth
        ext = w * (-(-(p + k) // p))
        total = 0.0
        for i in range(p):
            window = ext[i:i + k]
            assert window in self.values, f"inadmissible window {window} on a periodic orbit"
            total += self.values[window]
        return total

    def bowen_constant(self) -> tuple[float, float]:
        """``(delta, C)`` for the Bowen and Walters conditions.

        Under the metric ``2**-(first index where points differ)``, two points
        whose orbits stay within ``2**-(depth+1)`` for ``n`` steps share
        coordinates ``0 .. n+depth-1``, so each Birkhoff-sum difference is
        exactly zero and ``C = 0``.
        """
        return 2.0 ** -(self.depth + 1), 0.0

    def lookup_array(self) -> np.ndarray:
        """Values indexed by the base-``n`` code of a word; NaN on forbidden words."""
        n, k = self.system.n, self.depth
        arr = np.full(n ** k, np.nan)
        for w, v in self.values.items():
            arr[word_code(w, n)] = v
        return arr


def word_code(w: Sequence[int], n: int) -> int:
    code = 0
    for s in w:
        code = code * n + s
    return code


def format_word(w: Sequence[int]) -> str:
    if w and max(w) > 9:
        return ",".join(map(str, w))
    return "".join(map(str, w))


def parse_word(text: str) -> tuple:
    """Inverse of :func:`format_word`: ``"011"`` or ``"0,11,3"``."""
    parts = text.split(",") if "," in text else list(text)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidPotentialError(f"potential: cannot parse word {text!r}") from None
