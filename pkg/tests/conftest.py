import math

import numpy as np
import pytest

from gibbsolver import LocallyConstantPotential, full_shift, golden_mean_shift, validate_system

LOG43 = math.log(4 / 3)
LOG3 = math.log(3)
GOLDEN = (1 + math.sqrt(5)) / 2


def nonpos_potential(sys=None):
    """Depth-2 potential: log(4/3) on the cylinder 01, -log 3 elsewhere."""
    sys = sys or full_shift(2)
    return LocallyConstantPotential.from_function(
        sys, 2, lambda w: LOG43 if w == (0, 1) else -LOG3)


@pytest.fixture
def full2():
    return full_shift(2)


@pytest.fixture
def golden():
    return golden_mean_shift()


@pytest.fixture
def flip():
    return validate_system(2, [[0, 1], [1, 0]])


@pytest.fixture
def nonpos(full2):
    return nonpos_potential(full2)


def perron_root_oracle(M):
    """Spectral radius from a dense eigensolver, independent of the package's iteration."""
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(M, dtype=float)))))


def fixture_set():
    """Small exact systems paired with potentials of depth 1..3 (at most 8 cylinder indices)."""
    rng = np.random.default_rng(20261019)
    f2, f3, gm = full_shift(2), full_shift(3), golden_mean_shift()
    sft3 = validate_system(3, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    out = [
        ("full2-zero", f2, LocallyConstantPotential.constant(f2, 0.0)),
        ("full2-nonpos", f2, nonpos_potential(f2)),
        ("full2-letters", f2, LocallyConstantPotential.letter_weights(f2, [0.0, math.log(2)])),
        ("full3-zero", f3, LocallyConstantPotential.constant(f3, 0.0)),
        ("golden-zero", gm, LocallyConstantPotential.constant(gm, 0.0)),
        ("golden-letters", gm, LocallyConstantPotential.letter_weights(gm, [1.0, 1.0])),
    ]
    for name, sys, depth in (("full2", f2, 3), ("golden", gm, 3), ("full3", f3, 2),
                             ("sft3", sft3, 2), ("golden", gm, 2)):
        out.append((f"{name}-rand{depth}", sys, LocallyConstantPotential.from_function(
            sys, depth, lambda w: float(rng.normal()))))
    return out


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
