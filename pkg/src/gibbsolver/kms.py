"""Inverse temperatures ``beta`` with ``P(T, -beta phi) = 0`` and the KMS verdict.

Existence of a KMS state at ``beta`` is equivalent to the vanishing of the
pressure of ``-beta phi``. Uniqueness at such a ``beta`` follows when no
periodic point has a zero Birkhoff sum (principality) and ``phi`` satisfies
the Bowen condition; a periodic point with zero Birkhoff sum together with
the Walters condition forces ``P(T, -beta phi) > 0`` for every ``beta``.
Potentials of one strict sign have exactly one root, inside
``[h(T)/max phi, h(T)/min phi]``.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import GibbsError
from .potential import LocallyConstantPotential
from .symbolic import (DEFAULT_WORD_CAP, PeriodicOrbit, ShiftSystem, periodic_orbits,
                       require_exact)
from .transfer import DEFAULT_MAX_ITER, DEFAULT_TOL, pressure

logger = logging.getLogger(__name__)


class SignClass(str, enum.Enum):
    STRICTLY_POSITIVE = "strictly_positive"
    STRICTLY_NEGATIVE = "strictly_negative"
    MIXED = "mixed"
    HAS_ZERO = "has_zero"


class Verdict(str, enum.Enum):
    #: strict sign: one inverse temperature, unique KMS state
    STRICT_SIGN = "iv"
    #: zero Birkhoff sum on a periodic orbit: pressure positive, no KMS state
    NOT_PRINCIPAL = "iii"
    #: roots found; uniqueness per root when principal and Bowen
    ROOTS = "i+ii"
    #: principal up to the period bound but the pressure never vanishes
    NO_ROOT = "i:no-root"
    INCONCLUSIVE = "inconclusive"


class Status(str, enum.Enum):
    OK = "ok"
    INCONCLUSIVE = "inconclusive"


@dataclass
class KmsOptions:
    tol: float = 1e-10
    """Bisection tolerance on beta."""
    pressure_tol: float = 1e-9
    """Largest |P(T, -beta phi)| accepted at a reported root."""
    scan_range: tuple[float, float] = (-50.0, 50.0)
    scan_steps: int = 201
    max_period: int = 16
    zero_tol: float = 1e-9
    """Birkhoff sums at or below this are treated as zero."""
    eig_tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    word_cap: int = DEFAULT_WORD_CAP


@dataclass
class KmsReport:
    roots: list[float] = field(default_factory=list)
    root_brackets: list[tuple[float, float]] = field(default_factory=list)
    bracket_used: tuple[float, float] | None = None
    status: Status = Status.OK
    pressure_curve: list[tuple[float, float]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    principal_up_to_N: bool | None = None
    max_period: int | None = None
    violations: list[tuple[PeriodicOrbit, float]] = field(default_factory=list)
    sign_class: SignClass | None = None
    bowen: tuple[float, float] | None = None
    verdict: Verdict | None = None
    unique_beta: bool = False
    unique_kms: bool = False
    entropy: float | None = None


class _PressureCurve:
    """``beta -> P(T, -beta phi)`` with memoisation."""

    def __init__(self, sys, phi, opts: KmsOptions):
        self.sys, self.phi, self.opts = sys, phi, opts
        self.cache: dict[float, float] = {}

    def __call__(self, beta: float) -> float:
        beta = float(beta)
        if beta not in self.cache:
            self.cache[beta] = pressure(self.sys, self.phi * -beta,
                                        self.opts.eig_tol, self.opts.max_iter)
        return self.cache[beta]


def pressure_at(sys: ShiftSystem, phi: LocallyConstantPotential, beta: float,
                tol: float = DEFAULT_TOL) -> float:
    """``P(T, -beta phi)``."""
    require_exact(sys, "kms.pressure_at")
    return pressure(sys, phi * -beta, tol)


def sign_class(phi: LocallyConstantPotential) -> SignClass:
    if phi.min_value > 0:
        return SignClass.STRICTLY_POSITIVE
    if phi.max_value < 0:
        return SignClass.STRICTLY_NEGATIVE
    if phi.min_value < 0 < phi.max_value:
        return SignClass.MIXED
    return SignClass.HAS_ZERO


def _bisect(g, a: float, b: float, ga: float, gb: float, opts: KmsOptions) -> float:
    """Root of ``g`` in ``[a, b]`` given ``ga * gb <= 0``."""
    if ga == 0:
        return a
    if gb == 0:
        return b
    for _ in range(400):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        gm = g(mid)
        if gm == 0:
            return mid
        if (gm > 0) == (ga > 0):
            a, ga = mid, gm
        else:
            b, gb = mid, gm
        if b - a <= opts.tol and abs(g(0.5 * (a + b))) <= opts.pressure_tol:
            break
    return 0.5 * (a + b)


def _scan(g, opts: KmsOptions) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = opts.scan_range
    betas = np.linspace(lo, hi, opts.scan_steps)
    return betas, np.array([g(b) for b in betas])


def find_kms_beta(sys: ShiftSystem, phi: LocallyConstantPotential,
                  opts: KmsOptions | None = None) -> KmsReport:
    """Solve ``P(T, -beta phi) = 0``.

    Strictly signed potentials are bisected on the bracket
    ``[h/max phi, h/min phi]``. Otherwise ``g(beta) = P(T, -beta phi)`` is
    sampled on ``opts.scan_range``; by convexity there are at most two sign
    changes, each bisected. When every sample is positive the minimum is
    refined between its neighbours; a minimum at the edge of the scan gives
    an inconclusive report rather than a guess.
    """
    opts = opts or KmsOptions()
    require_exact(sys, "kms.find_kms_beta")
    g = _PressureCurve(sys, phi, opts)
    report = KmsReport(sign_class=sign_class(phi))
    h = g(0.0)
    report.entropy = h
    betas, vals = _scan(g, opts)
    report.pressure_curve = [(float(b), float(v)) for b, v in zip(betas, vals)]

    if report.sign_class in (SignClass.STRICTLY_POSITIVE, SignClass.STRICTLY_NEGATIVE):
        a, b = h / phi.max_value, h / phi.min_value
        pad = 1e-8 * (1.0 + max(abs(a), abs(b)))
        a, b = a - pad, b + pad
        report.bracket_used = (a, b)
        ga, gb = g(a), g(b)
        if ga * gb > 0:
            raise GibbsError(
                f"kms: pressure has no sign change on the bracket [{a:.12g}, {b:.12g}]")
        root = _bisect(g, a, b, ga, gb, opts)
        report.roots, report.root_brackets = [root], [(a, b)]
    else:
        amplitude = max(abs(phi.min_value), abs(phi.max_value))
        _roots_from_scan(g, betas, vals, amplitude, opts, report)

    for beta in report.roots:
        if abs(g(beta)) > opts.pressure_tol:
            report.warnings.append(
                f"|P(T, -beta phi)| = {abs(g(beta)):.3g} at beta = {beta:.15g} exceeds the pressure tolerance")
    report.unique_beta = len(report.roots) == 1 and report.status == Status.OK
    for w in report.warnings:
        logger.warning(w)
    return report


def _roots_from_scan(g, betas, vals, amplitude: float, opts: KmsOptions,
                     report: KmsReport) -> None:
    # pressure values below this are rounding noise of the eigenvalue route
    noise = 1e3 * np.finfo(float).eps * (1.0 + np.abs(betas) * amplitude)
    credible = np.abs(vals) > noise
    for i in range(len(betas) - 1):
        if vals[i] * vals[i + 1] <= 0 and (credible[i] or credible[i + 1]):
            a, b = float(betas[i]), float(betas[i + 1])
            root = _bisect(g, a, b, vals[i], vals[i + 1], opts)
            if report.roots and root == report.roots[-1]:
                continue
            report.roots.append(root)
            report.root_brackets.append((a, b))
    if len(report.roots) > 2:
        # a convex curve crosses zero at most twice; more crossings mean
        # the pressure vanishes on an interval
        report.roots = [report.roots[0], report.roots[-1]]
        report.root_brackets = [report.root_brackets[0], report.root_brackets[-1]]
        report.warnings.append(
            "pressure vanishes on an interval of beta; reporting its endpoints")
    if report.roots:
        return

    if not credible.all():
        flat = betas[~credible]
        report.status = Status.INCONCLUSIVE
        report.warnings.append(
            f"pressure is within rounding of zero for beta in [{flat[0]:.6g}, {flat[-1]:.6g}]; "
            "no root certified")
        return
    if vals.min() < 0:
        report.status = Status.INCONCLUSIVE
        report.warnings.append("pressure negative on the whole scan range")
        return
    i = int(np.argmin(vals))
    if i == 0 or i == len(betas) - 1:
        report.status = Status.INCONCLUSIVE
        report.warnings.append(
            "pressure minimum lies at the edge of the scan range; widen scan_range")
        return
    # convexity puts the true minimum between the neighbours of the smallest sample
    a, b = float(betas[i - 1]), float(betas[i + 1])
    res = minimize_scalar(g, bounds=(a, b), method="bounded",
                          options={"xatol": opts.tol})
    bmin, gmin = float(res.x), float(res.fun)
    report.bracket_used = (a, b)
    if gmin > opts.pressure_tol:
        return
    if gmin >= -opts.pressure_tol:
        report.roots = [bmin]
        report.root_brackets = [(a, b)]
        report.warnings.append("pressure curve is tangent to zero at its minimum")
        return
    for lo, hi in ((a, bmin), (bmin, b)):
        report.roots.append(_bisect(g, lo, hi, g(lo), g(hi), opts))
        report.root_brackets.append((lo, hi))


def evans_solve(lams, tol: float = 1e-14) -> float | None:
    """Solve ``sum_j exp(-beta lam_j) = 1`` directly.

    Returns ``None`` unless all ``lam_j`` are nonzero with one common sign;
    otherwise the left side exceeds one for every ``beta``.
    """
    lams = np.asarray(lams, dtype=float)
    if lams.size < 2:
        raise ValueError("kms: need at least two letter weights")
    if not ((lams > 0).all() or (lams < 0).all()):
        return None

    def f(beta):
        x = -beta * lams
        top = x.max()
        return top + math.log(np.exp(x - top).sum())

    n = lams.size
    a, b = sorted((math.log(n) / lams.max(), math.log(n) / lams.min()))
    if a == b:
        return a
    return brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps)


def zacharias_check(sys: ShiftSystem, lams, beta: float) -> float:
    """Spectral radius of ``diag(exp(-beta lam)) @ A``, computed by a dense eigensolver."""
    lams = np.asarray(lams, dtype=float)
    if lams.shape != (sys.n,):
        raise GibbsError(f"kms: expected {sys.n} letter weights, got {lams.size}")
    require_exact(sys, "kms.zacharias_check")
    D = np.diag(np.exp(-beta * lams))
    return float(np.max(np.abs(np.linalg.eigvals(D @ sys.A))))


def check_principality(sys: ShiftSystem, phi: LocallyConstantPotential, N: int = 16,
                       tol: float = 1e-9, cap: int | None = None
                       ) -> tuple[bool, list[tuple[PeriodicOrbit, float]]]:
    """Periodic orbits of period at most ``N`` whose Birkhoff sum is within ``tol`` of zero.

    A finite certificate: an empty list says nothing about longer periods.
    """
    violations = []
    for orbit in periodic_orbits(sys, N, cap):
        s = phi.birkhoff_sum(orbit)
        if abs(s) <= tol:
            violations.append((orbit, s))
    return not violations, violations


def classify(sys: ShiftSystem, phi: LocallyConstantPotential,
             opts: KmsOptions | None = None) -> KmsReport:
    """Full existence/uniqueness report for the action generated by ``phi``."""
    opts = opts or KmsOptions()
    require_exact(sys, "kms.classify")
    report = find_kms_beta(sys, phi, opts)
    if min(abs(phi.min_value), abs(phi.max_value)) > opts.zero_tol and \
            report.sign_class in (SignClass.STRICTLY_POSITIVE, SignClass.STRICTLY_NEGATIVE):
        # |Birkhoff sum over p steps| >= p * min|phi|: nothing to enumerate
        principal, violations = True, []
    else:
        principal, violations = check_principality(sys, phi, opts.max_period, opts.zero_tol,
                                                   opts.word_cap)
    report.principal_up_to_N = principal
    report.max_period = opts.max_period
    report.violations = violations
    report.bowen = phi.bowen_constant()
    bowen_ok = report.bowen[1] == 0.0

    if report.sign_class in (SignClass.STRICTLY_POSITIVE, SignClass.STRICTLY_NEGATIVE):
        report.verdict = Verdict.STRICT_SIGN
        report.unique_kms = principal and bowen_ok and report.unique_beta
    elif violations:
        # locally constant phi satisfies the Walters condition, so a zero
        # Birkhoff sum rules out roots for every beta, scanned or not
        report.verdict = Verdict.NOT_PRINCIPAL
        report.status = Status.OK
        if report.roots:
            report.warnings.append(
                f"discarded scan roots {report.roots}: a zero Birkhoff sum forces positive pressure")
            report.roots, report.root_brackets = [], []
            report.unique_beta = False
        low = min(p for _, p in report.pressure_curve)
        if low <= -opts.pressure_tol:
            report.warnings.append(
                f"zero Birkhoff sum found but sampled pressure reaches {low:.3g}")
    elif report.status == Status.INCONCLUSIVE:
        report.verdict = Verdict.INCONCLUSIVE
    elif report.roots:
        report.verdict = Verdict.ROOTS
        report.unique_kms = principal and bowen_ok
    else:
        report.verdict = Verdict.NO_ROOT
    return report
