"""Potential theory and tropical convexity on compact metric graphs."""

from ._config import Tolerances, get_tolerances, use_tolerances
from .divisors import RDivisor, SignedDivisor, point_mass
from .exceptions import (
    CertificateFailed,
    DegreeMismatch,
    DisconnectedGraph,
    DivGraphError,
    DuplicateEdgeId,
    GraphMismatch,
    InvalidDivisorSpec,
    InvalidGraphSpec,
    InvalidRange,
    KappaTooSmall,
    NonEffectiveDivisor,
    NonPositiveEdgeLength,
    NotInHull,
    ParameterOutOfRange,
    PointNotOnGraph,
    ZeroDegreeInput,
)
from .graph import (
    ClosedSubset,
    Edge,
    MetricGraph,
    Point,
    build_graph,
    dist,
    subset_covers_gamma,
    subset_intersect,
    subset_union,
    subsets_meet,
)
from .potential import LaplacianSystem, associated_function, effective_resistance, j_function
from .projection import (
    TropicalProjection,
    canonical_project,
    contraction_sample,
    retraction_sample,
)
from .pwl import (
    Extrema,
    PwlFunction,
    pwl_clip,
    pwl_combine,
    pwl_divisor,
    pwl_eval,
    pwl_extrema,
    pwl_integral,
    pwl_level_set,
    pwl_normalize,
)
from .reduced import (
    CertificateReport,
    ReducedResult,
    TConvexHull,
    extremals,
    hull_contains,
    reduced_certificate,
    reduced_on_hull,
    reduced_on_segment,
)
from .space import (
    TSegment,
    rho,
    s_func,
    same_divisor,
    segment_contains,
    segment_intersection,
    t_path_eval,
    tconv,
)

__version__ = "0.1.0"

__all__ = [
    "CertificateFailed",
    "CertificateReport",
    "ClosedSubset",
    "DegreeMismatch",
    "DisconnectedGraph",
    "DivGraphError",
    "DuplicateEdgeId",
    "Edge",
    "Extrema",
    "GraphMismatch",
    "InvalidDivisorSpec",
    "InvalidGraphSpec",
    "InvalidRange",
    "KappaTooSmall",
    "LaplacianSystem",
    "MetricGraph",
    "NonEffectiveDivisor",
    "NonPositiveEdgeLength",
    "NotInHull",
    "ParameterOutOfRange",
    "Point",
    "PointNotOnGraph",
    "PwlFunction",
    "RDivisor",
    "ReducedResult",
    "SignedDivisor",
    "TConvexHull",
    "TSegment",
    "Tolerances",
    "TropicalProjection",
    "ZeroDegreeInput",
    "associated_function",
    "build_graph",
    "canonical_project",
    "contraction_sample",
    "dist",
    "effective_resistance",
    "extremals",
    "get_tolerances",
    "hull_contains",
    "j_function",
    "point_mass",
    "pwl_clip",
    "pwl_combine",
    "pwl_divisor",
    "pwl_eval",
    "pwl_extrema",
    "pwl_integral",
    "pwl_level_set",
    "pwl_normalize",
    "reduced_certificate",
    "reduced_on_hull",
    "reduced_on_segment",
    "retraction_sample",
    "rho",
    "s_func",
    "same_divisor",
    "segment_contains",
    "segment_intersection",
    "subset_covers_gamma",
    "subset_intersect",
    "subset_union",
    "subsets_meet",
    "t_path_eval",
    "tconv",
    "use_tolerances",
]
