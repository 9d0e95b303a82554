"""
A connection with torsion
=========================

On the plane take Gamma_y(v, xi) = beta (v1 xi2 - v2 xi1) e2.  It is purely
antisymmetric, so the geodesic spray only sees its symmetric part and
geodesics are straight lines.  Jacobi fields still feel the torsion through
the nabla_t Tor(J, c') term of the covariant Jacobi equation.
"""

import numpy as np

from jacobiflow import connection as cn
from jacobiflow import double_tangent as dt
from jacobiflow import spray_flow as sf
from jacobiflow.fields import random_polynomial_field
from jacobiflow.zoo import torsion_demo

model = torsion_demo(0.5)
y = np.array([0.1, 0.4])
e1, e2 = np.eye(2)
print("Tor(e1, e2) =", cn.torsion(model, y, e1, e2))

# torsion from the connector and the flip, for vector fields
rng = np.random.default_rng(5)
X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
print("operator route:", cn.torsion_operator_route(model, X, Y, y))
print("Gamma(u,v) - Gamma(v,u):", cn.torsion(model, y, X(y), Y(y)))

# geodesics are straight
geo = sf.integrate_geodesic(model, dt.TangentVector([0.0, 0.0], [1.0, 0.5]), 1.0, 1e-2)
print("\ngeodesic endpoint:", geo.final[:2])

# Jacobi data: the chart Jacobi field is affine, yet nabla_t J is not constant
X0 = dt.TangentVector([0.2, -0.1], [0.7, 0.4])
J0, nablaJ0 = np.array([0.3, 0.1]), np.array([-0.2, 0.5])
flow = sf.integrate_jacobi_flow(model, sf.jacobi_state_from_covariant(model, X0, J0, nablaJ0), 2.0, 1e-3)
classical = sf.classical_jacobi_oracle(model, X0, J0, nablaJ0, 2.0, 1e-3)
print("flow vs covariant Jacobi equation:", np.max(np.abs(flow.block(2) - classical.block(2))))
nabla = sf.covariant_velocity(model, flow)
print("nabla_t J at t = 0, 1, 2:", nabla[0], nabla[1000], nabla[-1])
