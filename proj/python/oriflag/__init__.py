"""Volumes, geodesic distances and expected distances on partially oriented flag manifolds."""

from ._core import (
    ConvergenceError,
    UnsupportedError,
    analytic_expected_distance,
    conjugate_partition,
    covering_multiplicity,
    estimate_expected_distance,
    expected_distance_full_flag,
    expected_distance_partial_flag_integral,
    flag_volume,
    geodesic_distance,
    isotropy_group,
    lifted_orbit,
    numeric_volume,
    quaternion_to_rotation,
    quotient_distance,
    random_special_orthogonal,
    rotate_vector,
    rotation_angles,
    rotation_to_quaternion,
    sample_distances,
    sphere_distance,
    sphere_volume,
)

__version__ = "0.1.0"
