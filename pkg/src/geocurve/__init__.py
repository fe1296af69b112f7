"""Frames and classification of curves in Euclidean space, spheres and hyperbolic space."""

from .ambient import (
    Kind,
    SpaceSpec,
    check_point,
    check_tangent,
    covariant_derivative,
    exp,
    exp_vec,
    geodesic_distance,
    inner,
    log,
    norm,
    project_to_model,
    project_to_tangent,
)
from .classification import (
    ClassificationReport,
    HyperplaneFit,
    HyperplaneSection,
    NormalDevelopment,
    Regime,
    classify_curve,
    classify_spherical,
    classify_totally_geodesic,
    euclidean_frenet_residual_e4,
    fit_hyperplane,
    frenet_sphere_residual,
    normal_development,
    recover_center,
    section_fit,
)
from .curves import (
    Curve,
    FourierLoopSpec,
    arc_length_resample,
    curve_from_points,
    derivatives,
    generate_geodesic,
    generate_geodesic_sphere_curve,
    generate_random_curve,
    generate_totally_geodesic_curve,
)
from .errors import GeocurveError
from .framing import (
    FrenetData,
    RMData,
    center_tangent_field,
    euclidean_frenet_general,
    frenet_frame_3d,
    rm_from_frenet_e3,
    rm_transport,
)

__version__ = "0.1.0"
