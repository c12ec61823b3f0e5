"""Exact decisions, certificates and bounds for the phaseless rank of nonnegative matrices."""

__version__ = "0.1.0"

from .applications import (
    GramWitness,
    PolytopeVH,
    cpsd_lift_witness,
    cpsd_upper_bound,
    equiangular_certificate,
    equiangular_matrix,
    mub_matrix,
    ngon,
    slack_matrix,
    small_angle_equiangular_max,
    verify_psd_witness,
)
from .errors import (
    BoundInapplicable,
    CapabilityError,
    DimensionError,
    DomainError,
    InvalidPolytopeError,
    LopsidedError,
    ParseError,
    WitnessInvalidError,
)
from .formats import parse_matrix, parse_polytope, read_matrix, read_polytope
from .lopsided import WeightVector, close_polygon, is_lopsided, lop_membership, polygon_residual
from .lp import Feasible, Infeasible, LinearProgram, lp_feasible, nonmax_system
from .matrix import (
    ComparisonMatrix,
    NonnegMatrix,
    PhasedMatrix,
    comparison_matrix,
    hadamard_power,
    numerical_rank,
    rational_det,
    rational_rank,
)
from .mmatrix import Method, MMatrixReport, is_nonsingular_m_matrix, leading_principal_minors
from .rank import (
    Bracket,
    LowerSource,
    Maximal,
    Nonmaximal,
    UpperSource,
    amoeba_membership,
    bracket,
    build_witness,
    decide_by_permutations,
    decide_by_submatrices,
    decide_nonmaximal,
    is_nonmaximal,
    lower_bound_hadamard,
    phase_local_search,
    signless_lower_bound,
    signless_rank_bruteforce,
    typical_rank_bounds,
    upper_bound_patching,
    verify_decision,
)
from .scan import RegionGrid, ScanFamily, Verdict, render_csv, render_svg, scan
from .semialg import (
    SemialgebraicReport,
    all_determinants_nonpositive,
    boundary_certificate,
    permanent,
    semialg_3x3,
    semialg_4x4,
    semialg_general,
)
