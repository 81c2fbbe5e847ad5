"""One-sided subshifts of finite type.

A shift is described by a zero-one transition matrix ``A`` on the alphabet
``{0, ..., n-1}``; a word ``w`` is admissible when ``A[w[i], w[i+1]] == 1``
for every consecutive pair. Words are plain tuples of ints throughout the
package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceededError, InvalidSystemError, NotExactError

DEFAULT_WORD_CAP = 10**6

Word = tuple  # tuple[int, ...]


def pattern_is_primitive(B) -> tuple[bool, bool]:
    """Return ``(irreducible, primitive)`` for the positivity pattern of ``B``.

    Works on dense arrays and scipy sparse matrices alike. Irreducibility is
    strong connectivity of the directed graph ``i -> j`` iff ``B[i, j] > 0``;
    primitivity additionally needs the gcd of cycle lengths to be one, which
    is read off the BFS levels in O(edges).
    """
    import scipy.sparse as sp

    G = sp.csr_matrix(B)
    G.eliminate_zeros()
    size = G.shape[0]
    if size == 0:
        return False, False
    fwd = _bfs_levels(G.indptr, G.indices, size)
    if (fwd < 0).any():
        return False, False
    GT = G.T.tocsr()
    if (_bfs_levels(GT.indptr, GT.indices, size) < 0).any():
        return False, False
    period = 0
    for i in range(size):
        row = G.indices[G.indptr[i]:G.indptr[i + 1]]
        for j in row:
            period = math.gcd(period, int(fwd[i] + 1 - fwd[j]))
    return True, period == 1


def _bfs_levels(indptr, indices, size) -> np.ndarray:
    level = np.full(size, -1, dtype=np.int64)
    level[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for j in indices[indptr[i]:indptr[i + 1]]:
                if level[j] < 0:
                    level[j] = level[i] + 1
                    nxt.append(int(j))
        frontier = nxt
    return level


def _primitivity_exponent(A: np.ndarray) -> int | None:
    n = A.shape[0]
    bound = (n - 1) ** 2 + 1
    B = A.astype(bool)
    P = B.copy()
    for k in range(1, bound + 1):
        if P.all():
            return k
        P = (P.astype(np.int64) @ B.astype(np.int64)) > 0
    return None


@dataclass(frozen=True, eq=False)
class ShiftSystem:
    """Subshift of finite type on ``n`` symbols with transition matrix ``A``.

    Build instances with :func:`validate_system`, :func:`full_shift` or
    :func:`golden_mean_shift`; the constructor trusts its arguments.
    """

    n: int
    A: np.ndarray
    irreducible: bool
    primitive: bool
    primitivity_exponent: int | None = None
    word_cap: int = DEFAULT_WORD_CAP
    _successors: tuple = field(default=(), repr=False)

    @property
    def is_full(self) -> bool:
        return bool(self.A.all())

    def successors(self, a: int) -> tuple[int, ...]:
        return self._successors[a]

    def is_admissible(self, w: Sequence[int]) -> bool:
        if len(w) == 0 or any(not 0 <= s < self.n for s in w):
            return False
        return all(self.A[w[i], w[i + 1]] for i in range(len(w) - 1))

    def is_cyclically_admissible(self, w: Sequence[int]) -> bool:
        return self.is_admissible(w) and bool(self.A[w[-1], w[0]])

    def count_words(self, length: int) -> int:
        """Number of admissible words of ``length`` (sum of entries of A^(length-1))."""
        if length < 1:
            return 0
        v = np.ones(self.n, dtype=object)
        A = self.A.astype(object)
        for _ in range(length - 1):
            v = A @ v
        return int(sum(v))

    def __repr__(self) -> str:
        kind = "full" if self.is_full else "sft"
        return (f"ShiftSystem(n={self.n}, {kind}, irreducible={self.irreducible}, "
                f"primitive={self.primitive})")


def validate_system(n: int, A, word_cap: int = DEFAULT_WORD_CAP) -> ShiftSystem:
    """Check a zero-one transition matrix and compute its connectivity data.

    Raises
    ------
    InvalidSystemError
        If ``n < 2``, the shape is wrong, an entry is not 0 or 1, or some
        row or column is identically zero.
    """
    if int(n) != n or n < 2:
        raise InvalidSystemError(f"symbolic: alphabet size must be an integer >= 2, got {n}")
    n = int(n)
    arr = np.asarray(A)
    if arr.shape != (n, n):
        raise InvalidSystemError(f"symbolic: transition matrix must be {n}x{n}, got shape {arr.shape}")
    bad = ~np.isin(arr, (0, 1))
    if bad.any():
        i, j = map(int, np.argwhere(bad)[0])
        raise InvalidSystemError(f"symbolic: entry A[{i}][{j}] = {arr[i, j]!r} is not 0 or 1")
    arr = arr.astype(np.int64)
    for axis, name in ((1, "row"), (0, "column")):
        empty = np.flatnonzero(arr.sum(axis=axis) == 0)
        if empty.size:
            raise InvalidSystemError(f"symbolic: {name} {int(empty[0])} of the transition matrix is zero")
    arr.setflags(write=False)
    irreducible, primitive = pattern_is_primitive(arr)
    exponent = _primitivity_exponent(arr) if primitive else None
    succ = tuple(tuple(int(j) for j in np.flatnonzero(arr[i])) for i in range(n))
    return ShiftSystem(n, arr, irreducible, primitive, exponent, int(word_cap), succ)


def full_shift(n: int, word_cap: int = DEFAULT_WORD_CAP) -> ShiftSystem:
    return validate_system(n, np.ones((n, n), dtype=np.int64), word_cap)


def golden_mean_shift(word_cap: int = DEFAULT_WORD_CAP) -> ShiftSystem:
    """The shift on {0, 1} forbidding the word ``11``."""
    return validate_system(2, [[1, 1], [1, 0]], word_cap)


def is_exact(sys: ShiftSystem) -> bool:
    """Exactness of the shift map, which for an SFT is primitivity of ``A``."""
    return sys.primitive


def require_exact(sys: ShiftSystem, where: str) -> None:
    if not sys.primitive:
        raise NotExactError(f"{where}: system is not exact (transition matrix is not primitive)")


def _extend(sys: ShiftSystem, words: list[tuple], length: int) -> list[tuple]:
    while words and len(words[0]) < length:
        words = [w + (b,) for w in words for b in sys.successors(w[-1])]
    return words


def admissible_words(sys: ShiftSystem, length: int, cap: int | None = None) -> list[tuple]:
    """All admissible words of ``length`` in lexicographic order.

    Raises
    ------
    CapExceededError
        If the count exceeds ``cap`` (defaults to ``sys.word_cap``).
    """
    if length < 1:
        raise ValueError(f"symbolic: word length must be >= 1, got {length}")
    cap = sys.word_cap if cap is None else cap
    count = sys.count_words(length)
    if count > cap:
        raise CapExceededError(
            f"symbolic: {count} admissible words of length {length} exceed the cap {cap}")
    return _extend(sys, [(a,) for a in range(sys.n)], length)


@dataclass(frozen=True, order=True)
class PeriodicOrbit:
    """Periodic orbit of the shift, stored as its least rotation.

    ``representative`` repeated forever is a point of least period ``period``.
    """

    period: int
    representative: tuple

    def rotations(self) -> Iterator[tuple]:
        w = self.representative
        for i in range(self.period):
            yield w[i:] + w[:i]

    def __str__(self) -> str:
        sep = "," if max(self.representative) > 9 else ""
        return "{" + sep.join(map(str, self.representative)) + "}"


def _is_lyndon(w: tuple) -> bool:
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def periodic_orbits(sys: ShiftSystem, N: int, cap: int | None = None) -> list[PeriodicOrbit]:
    """Every periodic orbit of least period at most ``N``.

    Orbits are sorted by period, then by representative. The cap bounds the
    total number of periodic points, ``sum(trace(A^p) for p <= N)``.
    """
    if N < 1:
        raise ValueError(f"symbolic: maximal period must be >= 1, got {N}")
    cap = sys.word_cap if cap is None else cap
    A = sys.A.astype(object)
    P = np.identity(sys.n, dtype=object)
    points = 0
    for _ in range(N):
        P = P @ A
        points += int(np.trace(P))
    if points > cap:
        raise CapExceededError(
            f"symbolic: {points} periodic points of period <= {N} exceed the cap {cap}")

    orbits = []
    for p in range(1, N + 1):
        for s in range(sys.n):
            # least rotation starts at its smallest symbol, so stay >= s
            stack = [(s,)]
            while stack:
                w = stack.pop()
                if len(w) == p:
                    if sys.A[w[-1], s] and _is_lyndon(w):
                        orbits.append(PeriodicOrbit(p, w))
                    continue
                for b in reversed(sys.successors(w[-1])):
                    if b >= s:
                        stack.append(w + (b,))
    orbits.sort()
    return orbits


def entropy(sys: ShiftSystem) -> float:
    """Topological entropy ``P(T, 0)``: log of the Perron root of ``A``."""
    from .potential import LocallyConstantPotential
    from .transfer import pressure

    require_exact(sys, "symbolic.entropy")
    return pressure(sys, LocallyConstantPotential.constant(sys, 0.0))
