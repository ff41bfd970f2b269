"""Saddle (inf-sup = sup-inf) representations of polyhedral positively
homogeneous functions by two-index families of linear functions."""
from .config import DEFAULT_TOLERANCES, Tolerances
from .geometry import (
    Certificate,
    LPProblem,
    LPResult,
    MalformedInputError,
    NumericalFailureError,
    in_convex_hull,
    lp_solve,
    minimal_generators,
    nearest_point_origin,
    polytope_intersection_point,
)
from .phfunc import (
    ApproximationFamilies,
    DCPair,
    MaxOfLinear,
    MinOfLinear,
    SaddleFamily,
    dc_add,
    dc_max,
    dc_min,
    dc_neg,
    dc_scale,
    eval_dc,
    eval_infsup,
    eval_sublinear,
    eval_superlinear,
    eval_supinf,
)
from .oracle import SphereSampler, brute_force_extrema, random_dc, random_family, sample_sphere
from .saddle import (
    ConstructionError,
    SaddleReport,
    build_from_approximations,
    exhaustive_families,
    from_dc,
    reduce,
    saddle_to_dc,
    validate_sandwich,
    verify_saddle,
)
from .analysis import (
    DirectionReport,
    LipschitzBound,
    SignResult,
    check_nonnegative,
    check_nonpositive,
    lipschitz_constant,
    steepest_ascent,
    steepest_descent,
)
from .document import Document, DocumentError, parse, serialize

__version__ = "0.1.0"
