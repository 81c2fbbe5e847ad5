"""Transfer operators on cylinder functions and their Perron data.

For a potential ``phi`` of depth ``k`` the functions of the first
``level = max(k - 1, 1)`` symbols form an invariant subspace of

    (L f)(x) = sum over symbols a with a.x admissible of exp(phi(a.x)) f(a.x),

so ``L`` acts as a finite nonnegative matrix ``M`` indexed by the admissible
words of length ``level``::

    M[u, v] = exp(phi(v_0 . u))   when v = v_0 . u[:-1] and v_0 . u is admissible.

Row ``u`` collects the preimages of the cylinder ``[u]``. Matrices written
with the opposite convention (rows for the extended word) are the transpose
of ``M``; the Perron root is the same and the left and right eigenvectors
swap roles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import logsumexp

from .errors import CapExceededError, ConvergenceError, GibbsError, NotExactError
from .potential import LocallyConstantPotential, word_code
from .symbolic import ShiftSystem, admissible_words, pattern_is_primitive, require_exact

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10**5
DEFAULT_STALL_TOL = 1e-9
_TINY = np.finfo(float).tiny
# above this size the O(size^3) squaring step is replaced by plain power iteration
DENSE_SQUARING_LIMIT = 400


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    level: int
    index: tuple
    entries: np.ndarray

    @property
    def size(self) -> int:
        return len(self.index)


@dataclass(frozen=True, eq=False)
class RpfData:
    """Perron root, eigenfunction and eigenmeasure of a transfer matrix.

    ``h`` is the right eigenvector (``M h = lambda h``) and ``nu`` the left one
    (``nu M = lambda nu``), normalised by ``sum(nu) == 1`` and ``nu @ h == 1``.
    Residuals are componentwise: ``max_i |(M h)_i - lambda h_i| / (M h)_i`` and
    likewise for ``nu``; either one bounds the relative error of ``lambda``.
    """

    lam: float
    h: np.ndarray
    nu: np.ndarray
    right_residual: float
    left_residual: float
    iterations: int
    index: tuple | None = None

    @property
    def log_lambda(self) -> float:
        return math.log(self.lam)


@dataclass(frozen=True, eq=False)
class CylinderMeasure:
    depth: int
    masses: dict

    def total(self) -> float:
        return math.fsum(self.masses.values())


def _log_entries(sys: ShiftSystem, phi: LocallyConstantPotential) -> tuple[tuple, np.ndarray]:
    """Cylinder index and the entrywise log of the transfer matrix (``-inf`` off the pattern)."""
    if phi.system is not sys and not np.array_equal(phi.system.A, sys.A):
        raise GibbsError("transfer: potential is defined on a different system")
    k = phi.depth
    level = max(k - 1, 1)
    index = admissible_words(sys, level)
    pos = {w: i for i, w in enumerate(index)}
    L = np.full((len(index), len(index)), -np.inf)
    for i, u in enumerate(index):
        for a in range(sys.n):
            if not sys.A[a, u[0]]:
                continue
            ext = (a,) + u
            L[i, pos[ext[:level]]] = phi.values[ext[:k]]
    return tuple(index), L


def build_transfer_matrix(sys: ShiftSystem, phi: LocallyConstantPotential) -> TransferMatrix:
    """Matrix of the transfer operator on functions of the first ``level`` symbols."""
    index, L = _log_entries(sys, phi)
    M = np.exp(L)
    M.setflags(write=False)
    return TransferMatrix(max(phi.depth - 1, 1), index, M)


def _spread(y, x, lam) -> float:
    # componentwise residual max |y_i - lam x_i| / y_i with y = B x; for B >= 0
    # and x > 0 this bounds the relative error of lam (Collatz-Wielandt)
    y = np.asarray(y)
    diff = np.abs(y - lam * x)
    live = y > 0
    if (diff[~live] > 0).any():
        return math.inf
    return float((diff[live] / y[live]).max()) if live.any() else math.inf


def _residuals(B, h, nu, lam):
    return _spread(B @ h, h, lam), _spread(B.T @ nu, nu, lam)


def _squared_vector(B: np.ndarray, tol: float, max_iter: int,
                    stall_tol: float) -> tuple[np.ndarray, int]:
    """Positive Perron vector of ``B`` (right) by repeated squaring with rebalancing.

    ``B^(2^j)`` squares the subdominant ratio at each step, so nearly periodic
    patterns converge as fast as any other. Once the normalised power stops
    changing the matrix is rebalanced to ``diag(x)^-1 B diag(x)``, whose
    Perron vector is close to all ones; otherwise small components of ``x``
    only get accuracy relative to the largest one. Rounding is amplified
    while the subdominant part decays, so a stalled result is finished by
    :func:`_polish`; if that still misses ``tol`` a residual within
    ``stall_tol`` is accepted.
    """
    x = np.ones(B.shape[0])
    its = 0
    _, spread = _ratio_spread(B, x)
    if spread < tol:
        return x, its
    previous = math.inf
    underflow = False
    for _sweep in range(6):
        C = B * x[None, :] / x[:, None]
        P = C / C.max()
        z = x
        for _ in range(200):
            if its >= max_iter:
                raise ConvergenceError(
                    f"transfer: no convergence after {its} squaring steps (spread {spread:.3g})")
            Q = P @ P
            top = Q.max()
            if not math.isfinite(top) or top <= 0:
                raise ConvergenceError("transfer: matrix power left the floating-point range")
            Q /= top
            its += 1
            change = np.abs(Q - P).max()
            P = Q
            if change > 1e-6:
                continue
            # the rows of P are close to proportional: read off the vector
            y = P.sum(axis=1)
            if not y.min() > 0:
                underflow = True
                break
            z = x * y
            z /= z.max()
            _, spread = _ratio_spread(B, z)
            if spread < tol:
                return z, its
            if change <= 8 * np.finfo(float).eps:
                break
        if underflow:
            break
        x = z
        if spread > 0.5 * previous:
            break
        previous = spread
    with np.errstate(all="ignore"):
        x, spread = _polish(B, x, tol)
        if spread >= tol:
            y, other = _polish(B, np.ones(B.shape[0]), tol)
            if other < spread:
                x, spread = y, other
        if spread >= tol:
            start = _log_squared_start(B)
            if start is not None:
                y, other = _polish(B, start, tol)
                if other < spread:
                    x, spread = y, other
    if spread < tol or spread <= stall_tol:
        return x, its
    raise ConvergenceError(f"transfer: Perron vector stalled at spread {spread:.3g} above tol {tol:.3g}")


def _log_perron_vector(L: np.ndarray, max_squarings: int = 1100) -> np.ndarray:
    """Log of the Perron direction of ``exp(L)`` by repeated squaring in the log domain.

    Nothing underflows, so this works when the entries span more decades
    than a double can hold. The result has maximum zero.
    """
    for _ in range(max_squarings):
        Q = np.empty_like(L)
        for i in range(L.shape[0]):
            Q[i] = logsumexp(L[i][:, None] + L, axis=0)
        Q -= Q.max()
        live = np.isfinite(L)
        done = np.array_equal(live, np.isfinite(Q)) and bool(
            (np.abs(Q[live] - L[live]) <= 4 * np.finfo(float).eps * (1 + np.abs(L[live]))).all())
        L = Q
        if done:
            break
    logx = logsumexp(L, axis=1)
    return logx - logx.max()


def _log_squared_start(B: np.ndarray) -> np.ndarray | None:
    """Starting vector for :func:`_polish` when ordinary squaring underflowed.

    Returns ``None`` if the vector has components outside the floating-point range.
    """
    with np.errstate(divide="ignore"):
        x = np.exp(_log_perron_vector(np.log(B)))
    return x if x.min() > 0 else None


def _ratio_spread(B: np.ndarray, z: np.ndarray) -> tuple[float, float]:
    if not z.min() > 0:
        return math.inf, math.inf
    ratio = (B @ z) / z
    return float(ratio.max()), float((ratio.max() - ratio.min()) / ratio.max())


def _polish(B: np.ndarray, x: np.ndarray, tol: float, steps: int = 100) -> tuple[np.ndarray, float]:
    """Noda iteration in balanced coordinates.

    Each step solves ``(mu I - C) w = 1`` with ``C = diag(x)^-1 B diag(x)`` and
    ``mu`` the upper Collatz-Wielandt bound, which sits just above the Perron
    root; the resolvent is then positive and strongly dominated by the
    Perron direction, so the step converges even where squaring has lost
    accuracy (nearly periodic patterns). Stops once ``mu`` stops decreasing.
    """
    ones = np.ones(B.shape[0])
    eye = np.eye(B.shape[0])
    mu, spread = _ratio_spread(B, x)
    best, best_spread = x, spread
    best_mu, stale = mu, 0
    for _ in range(steps):
        if best_spread < tol or stale >= 3:
            break
        C = B * x[None, :] / x[:, None]
        try:
            w = np.linalg.solve(mu * eye - C, ones)
        except np.linalg.LinAlgError:
            break
        if (w < 0).all():
            w = -w
        z = x * w
        if not (np.isfinite(z).all() and z.min() > 0):
            break
        x = z / z.max()
        mu, spread = _ratio_spread(B, x)
        if spread < best_spread:
            best, best_spread = x, spread
        if mu < best_mu:
            best_mu, stale = mu, 0
        else:
            stale += 1
    return best, best_spread


def _squaring(B: np.ndarray, tol: float, max_iter: int, stall_tol: float):
    h, its_r = _squared_vector(B, tol, max_iter, stall_tol)
    nu, its_l = _squared_vector(np.ascontiguousarray(B.T), tol, max_iter, stall_tol)
    nu /= nu.sum()
    lam = float(nu @ (B @ h)) / float(nu @ h)
    right, left = _residuals(B, h, nu, lam)
    return lam, h, nu, right, left, its_r + its_l


def _power(B, tol: float, max_iter: int):
    BT = B.T.tocsr() if sp.issparse(B) else B.T
    size = B.shape[0]
    h = np.ones(size)
    nu = np.full(size, 1.0 / size)
    for its in range(1, max_iter + 1):
        h = B @ h
        h /= h.max()
        nu = BT @ nu
        nu /= nu.sum()
        lam = float(nu @ (B @ h)) / float(nu @ h)
        right, left = _residuals(B, h, nu, lam)
        if max(right, left) < tol:
            return lam, h, nu, right, left, its
    raise ConvergenceError(
        f"transfer: power iteration did not converge in {max_iter} steps "
        f"(residuals {right:.3g}, {left:.3g})")


def rpf_eigendata(M, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                  stall_tol: float = DEFAULT_STALL_TOL) -> RpfData:
    """Perron eigendata of a nonnegative matrix with primitive pattern.

    Accepts a :class:`TransferMatrix`, a dense array or a scipy sparse
    matrix. Small dense matrices are iterated by repeated squaring, larger
    or sparse ones by power iteration; both renormalise every step.
    Iteration targets residuals below ``tol``. Nearly periodic patterns have
    ill-conditioned eigenvectors; if the squaring route stalls at its
    rounding floor the result is accepted when residuals are below
    ``stall_tol`` (they are reported either way).

    Raises
    ------
    NotExactError
        If the positivity pattern is not primitive.
    ConvergenceError
        If the residuals stay above ``tol``.
    """
    index = None
    if isinstance(M, TransferMatrix):
        index, M = M.index, M.entries
    if not tol > 0:
        raise ValueError("transfer: tol must be positive")
    if (M < 0).sum() if sp.issparse(M) else (np.asarray(M) < 0).any():
        raise GibbsError("transfer: matrix has negative entries")
    _, primitive = pattern_is_primitive(M)
    if not primitive:
        raise NotExactError("transfer: positivity pattern is not primitive; Perron root is not simple")
    if sp.issparse(M):
        scale = float(M.max())
        lam, h, nu, right, left, its = _power((M / scale).tocsr(), tol, max_iter)
    else:
        M = np.asarray(M, dtype=float)
        scale = float(M.max())
        B = M / scale
        if B.shape[0] <= DENSE_SQUARING_LIMIT:
            lam, h, nu, right, left, its = _squaring(B, tol, max_iter, max(tol, stall_tol))
        else:
            lam, h, nu, right, left, its = _power(B, tol, max_iter)
    h = h / float(nu @ h)
    return RpfData(lam * scale, h, nu, right, left, its, index)


def pressure(sys: ShiftSystem, phi: LocallyConstantPotential, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Topological pressure ``P(T, phi)``, the log of the Perron root of ``L_phi``."""
    require_exact(sys, "transfer.pressure")
    # shift by the maximum so exp() stays in range for large |phi|
    top = phi.max_value
    _, L = _log_entries(sys, phi - top)
    # The Perron root is invariant under the similarity diag(e^-g) M diag(e^g).
    # With g a max-plus eigenvector every row of the rescaled matrix has
    # largest entry exactly 1, so the iteration never meets entries spanning
    # hundreds of decades. Entries that still underflow are clamped; that
    # moves every row sum, hence lambda, by a relative amount below n * tiny.
    mu, g = _max_plus_scaling(L)
    C = np.exp(L + g[None, :] - g[:, None] - mu)
    C[np.isfinite(L) & (C < _TINY)] = _TINY
    return math.log(_perron_root(C, tol, max_iter)) + mu + top


def _perron_root(C: np.ndarray, tol: float, max_iter: int) -> float:
    """Perron root from the right vector alone.

    After max-plus balancing the right vector is well scaled but the left
    one need not be, so the root is taken from the Collatz-Wielandt bounds
    ``min (Cx)_i/x_i <= lambda <= max (Cx)_i/x_i``; its relative error is at
    most half their spread.
    """
    if C.shape[0] > DENSE_SQUARING_LIMIT:
        return rpf_eigendata(C, tol, max_iter).lam
    x, _ = _squared_vector(C, tol, max_iter, max(tol, DEFAULT_STALL_TOL))
    ratio = (C @ x) / x
    return 0.5 * (float(ratio.max()) + float(ratio.min()))


def _max_plus_scaling(L: np.ndarray) -> tuple[float, np.ndarray]:
    """Maximum cycle mean of ``L`` and a max-plus eigenvector for it.

    ``L`` is the entrywise log of an irreducible matrix (``-inf`` for zeros).
    The cycle mean comes from Karp's formula; the eigenvector is the column
    of the max-plus closure of ``L - mu`` at a node on a critical cycle.
    """
    n = L.shape[0]
    # D[k, v]: heaviest walk of length k from node 0 to v
    D = np.full((n + 1, n), -np.inf)
    D[0, 0] = 0.0
    for k in range(1, n + 1):
        D[k] = (D[k - 1][:, None] + L).max(axis=0)
    with np.errstate(invalid="ignore"):
        ks = np.arange(n)[:, None]
        ratios = (D[n][None, :] - D[:n]) / (n - ks)
    ratios[~np.isfinite(ratios)] = np.inf
    ratios = ratios.min(axis=0)
    mu = float(ratios[np.isfinite(D[n])].max())
    S = L - mu
    for k in range(n):
        S = np.maximum(S, S[:, k:k + 1] + S[k:k + 1, :])
    c = int(np.argmax(np.diag(S)))
    return mu, S[:, c]


def _word_array(sys: ShiftSystem, length: int, cap: int) -> np.ndarray:
    count = sys.count_words(length)
    if count > cap:
        raise CapExceededError(
            f"transfer: {count} admissible words of length {length} exceed the cap {cap}")
    arr = np.arange(sys.n, dtype=np.int64)[:, None]
    for _ in range(length - 1):
        parts = []
        for b in range(sys.n):
            keep = arr[sys.A[arr[:, -1], b] == 1]
            parts.append(np.hstack([keep, np.full((len(keep), 1), b, dtype=np.int64)]))
        arr = np.vstack(parts)
    return arr


def log_iterated_ones(sys: ShiftSystem, phi: LocallyConstantPotential, n: int,
                      cap: int | None = None) -> tuple[tuple, np.ndarray]:
    """``log (L^n 1)`` on every level cylinder, by enumerating preimage words.

    For each index word ``u`` this sums ``exp`` of the Birkhoff sum over all
    admissible ``w`` of length ``n`` with ``w.u`` admissible. Independent of
    the matrix route; returns ``(index, log_values)``.
    """
    if n < 1:
        raise ValueError("transfer: n must be >= 1")
    cap = sys.word_cap if cap is None else cap
    k = phi.depth
    level = max(k - 1, 1)
    index = admissible_words(sys, level)
    words = _word_array(sys, n + level, cap)
    lookup = phi.lookup_array()
    powers = sys.n ** np.arange(k - 1, -1, -1)
    S = np.zeros(len(words))
    for i in range(n):
        S += lookup[words[:, i:i + k] @ powers]
    suffix = words[:, n:] @ (sys.n ** np.arange(level - 1, -1, -1))
    code_to_pos = {word_code(u, sys.n): j for j, u in enumerate(index)}
    group = np.array([code_to_pos[c] for c in suffix])
    gmax = np.full(len(index), -np.inf)
    np.maximum.at(gmax, group, S)
    acc = np.zeros(len(index))
    np.add.at(acc, group, np.exp(S - gmax[group]))
    return tuple(index), np.log(acc) + gmax


def pressure_sandwich(sys: ShiftSystem, phi: LocallyConstantPotential, n: int,
                      cap: int | None = None) -> tuple[float, float]:
    """``(min, max)`` over cylinders of ``(1/n) log (L^n 1)``.

    The Perron root is a ``nu``-average of ``L^n 1``, so the pressure lies
    between the two numbers; the gap closes as ``n`` grows.
    """
    _, logs = log_iterated_ones(sys, phi, n, cap)
    return float(logs.min()) / n, float(logs.max()) / n


def cylinder_measure(sys: ShiftSystem, phi: LocallyConstantPotential, rpf: RpfData,
                     m: int, cap: int | None = None) -> CylinderMeasure:
    """Masses of the eigenmeasure on the cylinders of length ``m``.

    Starts from ``nu`` on the level cylinders and extends with the conformal
    relation ``mass[u] = exp(phi(u)) * mass[u[1:]] / lambda``.
    """
    level = max(phi.depth - 1, 1)
    if m < level:
        raise GibbsError(f"transfer: measure depth {m} is below the index level {level}")
    index = rpf.index if rpf.index is not None else tuple(admissible_words(sys, level))
    if len(index) != len(rpf.nu) or (index and len(index[0]) != level):
        raise GibbsError("transfer: eigendata does not match the potential's cylinder index")
    cap = sys.word_cap if cap is None else cap
    if sys.count_words(m) > cap:
        raise CapExceededError(f"transfer: cylinders of length {m} exceed the cap {cap}")
    masses = {u: float(x) for u, x in zip(index, rpf.nu)}
    k, lam = phi.depth, rpf.lam
    for d in range(level + 1, m + 1):
        masses = {(a,) + u: math.exp(phi.values[((a,) + u)[:k]]) * x / lam
                  for u, x in masses.items() for a in range(sys.n) if sys.A[a, u[0]]}
        masses = dict(sorted(masses.items()))
    return CylinderMeasure(m, masses)
