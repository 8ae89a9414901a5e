"""Algorithms around commuting lambda-contractive operator families.

The package turns a fixed-point existence theory into runnable pieces:
orbit grids with memoized evaluation, greedy contraction walks and the
staged common-fixed-point solver, window scans for the finite
neighborhood inequality, colored-graph cover certificates, grid-coloring
trivialization, contraction-diagram classification, and an exact ledger
of the theory's constants and lambda constraints.
"""

from ._speed import BACKEND
from .combinatorics import (
    INFINITE,
    ColoredCompleteGraph,
    CoverResult,
    GridColoring,
    HypothesisViolation,
    KwayReport,
    MonoWindow,
    WindowSet,
    ck_search,
    cover_two_sets,
    detect_quarter_plane,
    kkr_constant,
    min_cover_diameter,
    mono_diameter,
    signature,
    trivialize_coloring,
    verify_kway,
)
from .constants import LAMBDA_STAR, Ledger, build_ledger, check_lambda
from .diagrams import (
    NONCANONICAL,
    Diagram,
    canonicalize,
    catalog,
    check_tps,
    classify_appendix,
    compute_diagram,
    scan_forbidden_configs,
    scan_si_and_forbidden_t,
)
from .errors import (
    BoxTooSmallError,
    CommutativityError,
    ConfigError,
    ContragridError,
    NonConvergenceError,
    PremiseError,
    VerificationError,
)
from .families import BUNDLED, get_bundled
from .grid import (
    MuEstimate,
    OrbitGrid,
    RhoReport,
    box_indices,
    check_fni,
    estimate_mu,
    mu_infinity_table,
    rho,
    write_rho_csv,
)
from .metric import (
    AffineOperator,
    CallableOperator,
    ContractionWitness,
    OperatorFamily,
    Space,
    apply_multi,
    contracting_direction,
    family_from_config,
    family_to_config,
    load_family_config,
    make_family,
    validate_family_axioms,
)
from .walks import (
    Walk,
    WalkStep,
    common_fixed_point,
    gbct_orbit_solve,
    greedy_walk,
    multi_target_walk,
)

__version__ = "0.1.0"

__all__ = [
    "AffineOperator",
    "BACKEND",
    "BoxTooSmallError",
    "BUNDLED",
    "CallableOperator",
    "ck_search",
    "canonicalize",
    "catalog",
    "check_fni",
    "check_lambda",
    "check_tps",
    "classify_appendix",
    "ColoredCompleteGraph",
    "CommutativityError",
    "common_fixed_point",
    "compute_diagram",
    "ConfigError",
    "ContractionWitness",
    "ContragridError",
    "contracting_direction",
    "cover_two_sets",
    "CoverResult",
    "detect_quarter_plane",
    "Diagram",
    "estimate_mu",
    "family_from_config",
    "family_to_config",
    "gbct_orbit_solve",
    "get_bundled",
    "greedy_walk",
    "GridColoring",
    "HypothesisViolation",
    "INFINITE",
    "kkr_constant",
    "KwayReport",
    "LAMBDA_STAR",
    "Ledger",
    "load_family_config",
    "make_family",
    "min_cover_diameter",
    "mono_diameter",
    "MonoWindow",
    "MuEstimate",
    "mu_infinity_table",
    "multi_target_walk",
    "NONCANONICAL",
    "NonConvergenceError",
    "OperatorFamily",
    "OrbitGrid",
    "PremiseError",
    "box_indices",
    "build_ledger",
    "rho",
    "RhoReport",
    "scan_forbidden_configs",
    "scan_si_and_forbidden_t",
    "signature",
    "Space",
    "apply_multi",
    "trivialize_coloring",
    "validate_family_axioms",
    "VerificationError",
    "verify_kway",
    "Walk",
    "WalkStep",
    "WindowSet",
    "write_rho_csv",
]
