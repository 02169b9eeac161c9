"""Relative orientation of subspaces from the geometric product of their blades."""

from .blades import Blade, SpanningSet, blade_from_spanning, blade_from_vectors, orthogonal_factorization, subspace_membership, unit_blade
from .errors import (
    BladeAngleError,
    DegenerateSpan,
    DimensionMismatch,
    GradeMismatch,
    NumericalFailure,
    RankDeficient,
    SplitFailure,
    ZeroBlade,
)
from .ga_core import (
    Multivector,
    dual,
    e,
    geometric_product,
    grade_projection,
    left_contraction,
    modulus,
    outer_product,
    reflect,
    reverse,
    rotor_apply,
    scalar_product,
)
from .oracle import PrincipalData, orthonormalize, principal_angles, svd_small
from .orientation import AngleReport, ProductDecomposition, bivector_split, cos_angle, decompose_product, full_orientation, sin_product

__version__ = "0.1.0"
