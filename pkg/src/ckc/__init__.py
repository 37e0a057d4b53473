"""Closed kinematic chains parametrized by diagonal lengths."""

from __future__ import annotations

from .angles import (
    AngleSolutionSet,
    Case,
    SphericalConfiguration,
    reconstruct,
    solve_joint,
)
from .chain import (
    CKCError,
    DegenerateError,
    DiagonalVector,
    InfeasibleError,
    JointAngles,
    LinkLengths,
    NonClosableError,
    NotSphericalError,
    diagonal_lengths,
    endpoint_map,
)
from .closure import ClosedConfiguration, balance, close, joint_positions, verify
from .cube import (
    HypothesisError,
    containment_check,
    cube_membership,
    cube_map,
    cube_map_inverse,
    cube_to_diagonals,
    from_cosine_terms,
    has_three_long_links,
    to_cosine_terms,
)
from .diagonals import (
    DiagonalSpace,
    bounding_box,
    decompose,
    membership_nested,
    membership_triangle,
    monte_carlo_volume,
    reach_bounds,
    sample_diagonals,
)
from .permute import LinkPermutation, map_diagonals, parametrize
from .sampling import SampledConfiguration, sample_configuration

__version__ = "0.1.0"

__all__ = [
    "AngleSolutionSet",
    "CKCError",
    "Case",
    "ClosedConfiguration",
    "DegenerateError",
    "DiagonalSpace",
    "DiagonalVector",
    "HypothesisError",
    "InfeasibleError",
    "JointAngles",
    "LinkLengths",
    "LinkPermutation",
    "NonClosableError",
    "NotSphericalError",
    "SampledConfiguration",
    "SphericalConfiguration",
    "balance",
    "bounding_box",
    "close",
    "containment_check",
    "cube_map",
    "cube_map_inverse",
    "cube_membership",
    "cube_to_diagonals",
    "decompose",
    "diagonal_lengths",
    "endpoint_map",
    "from_cosine_terms",
    "has_three_long_links",
    "joint_positions",
    "map_diagonals",
    "membership_nested",
    "membership_triangle",
    "monte_carlo_volume",
    "parametrize",
    "reach_bounds",
    "reconstruct",
    "sample_configuration",
    "sample_diagonals",
    "solve_joint",
    "to_cosine_terms",
    "verify",
]
