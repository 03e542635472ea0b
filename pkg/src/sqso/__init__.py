"""Separable quadratic stochastic operators on the probability simplex.

Exact validation and classification of a matrix pair ``(A, B)``, fast
iteration of the map ``x'_k = (sum_i a_ik x_i)(sum_j b_jk x_j)``, linear
Lyapunov certificates from polyhedral cones, and omega-limit estimates.
"""
from ._backend import BACKEND
from .dynamics import (LimitKind, LimitReport, StopReason, TrajectoryRecord, as_operator,
                       detect_limit, iterate)
from .errors import (AdmissibilityError, DimensionError, InfeasibleLevelSetError,
                     InternalInconsistencyError, NotVolterraError, RationalParseError,
                     SimplexError, SqsoError, UncertifiedError)
from .lyapunov import (LinearForm, ProductForm, RayBasis, Side, certificates,
                       check_certificate_preconditions, cone_extreme_rays, cone_membership,
                       lyapunov_value, rowsum_candidate, verify_monotone)
from .numerics import RationalMatrix, mat_det, mat_rank, rat_format, rat_parse, rows_identical
from .omega import (OmegaEstimate, StopConfig, empirical_omega, estimate_lambda,
                    omega_upper_set)
from .operators import (Admissibility, Case, Classification, CubicTensor, SqsoPair,
                        VolterraOperator, apply_sqso, apply_tensor, apply_volterra,
                        build_tensor, classify, is_volterra, pair_matches_tensor,
                        validate_pair, volterra_from_tensor)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "rat_parse", "rat_format", "RationalMatrix", "mat_det", "mat_rank", "rows_identical",
    "Admissibility", "SqsoPair", "validate_pair", "CubicTensor", "build_tensor",
    "pair_matches_tensor", "Case", "Classification", "classify", "apply_sqso",
    "apply_tensor", "VolterraOperator", "is_volterra", "volterra_from_tensor",
    "apply_volterra",
    "iterate", "detect_limit", "as_operator", "TrajectoryRecord", "StopReason",
    "LimitKind", "LimitReport",
    "Side", "RayBasis", "cone_extreme_rays", "cone_membership", "rowsum_candidate",
    "check_certificate_preconditions", "LinearForm", "ProductForm", "lyapunov_value",
    "verify_monotone", "certificates",
    "StopConfig", "estimate_lambda", "omega_upper_set", "empirical_omega", "OmegaEstimate",
    "SqsoError", "RationalParseError", "DimensionError", "SimplexError",
    "AdmissibilityError", "InternalInconsistencyError", "NotVolterraError",
    "UncertifiedError", "InfeasibleLevelSetError",
]
