"""Exact LP hierarchies for linear codes over finite fields."""

from .errors import KrawlpError, LevelError, PreconditionError, ResourceLimitError, UnsupportedFieldError
from .field import FieldSpec, char_value, hamming_weight
from .hierarchy import (
    PROGRAMS,
    CumulativeSolution,
    Instance,
    PseudoDistribution,
    build_full_pseudo_weak,
    build_kraw_pseudo,
    build_kraw_pseudo_weak,
    build_partial_pseudo,
    build_program,
    build_unsym_kraw,
    build_unsym_partial,
    cumulative_to_pseudo,
    pseudo_to_cumulative,
)
from .lattice import Lattice, enumerate_subspaces, gaussian_binomial, subspace_count
from .lp import (
    Constraint,
    LinearProgram,
    LpSolution,
    check_feasible,
    export_text,
    parse_text,
    solve,
    verify_infeasibility,
    verify_optimality,
    verify_unboundedness,
)
from .oracle import (
    brute_force_A,
    infeasibility_level,
    integrality_test,
    mass_transfer_step,
    nonintegral_point,
    verify_completeness,
)

__version__ = "0.1.0"
