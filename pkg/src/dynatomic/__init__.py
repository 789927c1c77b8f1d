"""Exact invariants and mod-p reductions of dynatomic curves of x^m + c."""

from .arith import mobius
from .cache import WorkspaceConfig
from .dynpoly import (
    Family,
    delta,
    delta_factor,
    delta_nn_mod_p,
    discriminant_table,
    iterate,
    multiplier_lambda,
    phi,
    psi,
)
from .errors import (
    ArithmeticInconsistencyError,
    DynatomicError,
    InexactDivisionError,
    InsufficientDataError,
    WorkBudgetError,
)
from .factortab import FactorTable, factor_integer
from .fibers import fiber_report, formal_period_points, orbits_mod_p, reduction_table
from .intpoly import cyclotomic
from .kneading import (
    Angle,
    angle_of_maximal,
    complement,
    disparity,
    internal_address,
    is_admissible,
    is_primitive,
    kneading_sequence,
    maximal_shift,
    rho_function,
    shift,
    successor,
)
from .monodromy import (
    MonodromyGraph,
    build_graph,
    export_graph,
    monodromy_permutations,
    robustness,
    vertices,
)
from .reduction import (
    PrimeClassification,
    candidate_bad_primes,
    classify_prime,
    gonality_bound,
    singularity_test,
)
from .resultants import discriminant_x, resultant_x, verify_factor_identities

__version__ = "0.1.0"
