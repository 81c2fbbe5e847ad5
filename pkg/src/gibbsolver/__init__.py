"""Ruelle transfer operators, topological pressure, Gibbs measures and KMS
inverse temperatures for subshifts of finite type and the circle maps
``x -> n x``."""
from .circle import CircleSystem, GridPotential, build_circle_operator, circle_pressure
from .errors import (CapExceededError, ConfigError, ConvergenceError, GibbsError,
                     InvalidPotentialError, InvalidSystemError, NotExactError)
from .kms import (KmsOptions, KmsReport, SignClass, Status, Verdict, check_principality,
                  classify, evans_solve, find_kms_beta, pressure_at, sign_class,
                  zacharias_check)
from .potential import LocallyConstantPotential
from .symbolic import (PeriodicOrbit, ShiftSystem, admissible_words, entropy, full_shift,
                       golden_mean_shift, is_exact, periodic_orbits, validate_system)
from .transfer import (CylinderMeasure, RpfData, TransferMatrix, build_transfer_matrix,
                       cylinder_measure, pressure, pressure_sandwich, rpf_eigendata)

__version__ = "0.1.0"
