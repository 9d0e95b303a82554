"""Iterated tangent bundles, connectors and the Jacobi flow on TTM, in numerical form."""

from .connection import (
    ChristoffelMap,
    ManifoldModel,
    connector,
    covariant_derivative_along_curve,
    covariant_derivative_field,
    curvature_commutator_oracle,
    curvature_operator,
    curvature_operator_route,
    horizontal_lift,
    levi_civita_from_metric,
    lie_bracket_ad,
    lie_bracket_via_flip,
    riemann_tensor,
    sectional_curvature,
    tangent_connector,
    torsion,
    torsion_operator_route,
)
from .double_tangent import (
    TangentVector,
    TTTVector,
    TTVector,
    add_over_E,
    add_over_TM,
    double_tangent_map,
    flip,
    flip_level2,
    scale_over_E,
    scale_over_TM,
    tangent_map,
    vertical_lift,
    vertical_projection,
)
from .errors import (
    BaseMismatch,
    DepthMismatch,
    DomainError,
    EvaluationError,
    JacobiFlowError,
    LeftDomain,
    MetricError,
    ModelSpecError,
    NotVertical,
    StepRejected,
)
from .spray_flow import (
    JacobiState,
    Trajectory,
    classical_jacobi_oracle,
    covariant_velocity,
    geo,
    geo_velocity,
    integrate_geodesic,
    integrate_jacobi_flow,
    jacobi_field_vector,
    jacobi_residual,
    jacobi_state_from_covariant,
    spray,
    variation_oracle,
)
from .tangent import Tangent, lift_constant, seed
from .zoo import ModelSpec, build, default_zoo, euclidean, half_plane, sphere, torsion_demo

__version__ = "0.1.0"
