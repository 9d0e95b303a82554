"""
Jacobi fields as flow lines on TTM
==================================

The vector field kappa_TM o TS on TTM has flow lines (c, c'; J, J') where c is
a geodesic and J a Jacobi field along it.  Here the flow is checked against a
one-parameter family of geodesics and against the covariant Jacobi equation,
then against sin t on the unit sphere.
"""

import numpy as np

from jacobiflow import double_tangent as dt
from jacobiflow import spray_flow as sf
from jacobiflow.zoo import sphere

model = sphere(1.0)
X = dt.TangentVector([0.2, -0.1], [0.4, 0.3])
J0, nablaJ0 = np.array([0.3, -0.2]), np.array([0.1, 0.5])

# covariant initial data becomes the chart velocity Jdot0 = nablaJ0 + Gamma(J0, xi0)
Y0 = sf.jacobi_state_from_covariant(model, X, J0, nablaJ0)
flow = sf.integrate_jacobi_flow(model, Y0, 2.0, 1e-3)
J = flow.block(2)

variation = sf.variation_oracle(
    model, lambda s: dt.TangentVector(Y0.x + s * Y0.J, Y0.xi + s * Y0.Jdot), 2.0, 1e-3, 1e-4
)
classical = sf.classical_jacobi_oracle(model, X, J0, nablaJ0, 2.0, 1e-3)
print("flow vs geodesic variation:", np.max(np.abs(J - variation.states)))
print("flow vs Jacobi equation   :", np.max(np.abs(J - classical.block(2))))
print("K.kappa.Y vs nabla_t J    :", np.max(np.abs(sf.covariant_velocity(model, flow) - classical.block(3))))

# the base of every flow line is a geodesic, bit for bit
geod = sf.integrate_geodesic(model, X, 2.0, 1e-3)
print("geodesic part identical   :", np.array_equal(flow.states[:, :4], geod.states))

# K o TK o TS vanishes identically, on or off flow lines
print("residual along the flow   :", max(np.max(np.abs(sf.jacobi_residual(model, dt.TTVector.from_array(s))))
                                      for s in flow.states[::100]))

# a normal Jacobi field with J(0) = 0 and |nabla J(0)| = 1 has length sin t
Y0 = sf.jacobi_state_from_covariant(model, dt.TangentVector([-1.0, 0.0], [1.0, 0.0]), [0, 0], [0, 1])
flow = sf.integrate_jacobi_flow(model, Y0, np.pi, 1e-3)
length = np.array([model.norm(s[:2], s[4:6]) for s in flow.states])
print("\n  t      |J|        sin t")
for k in range(0, len(flow), 500):
    print(f"{flow.times[k]:5.2f}  {length[k]:.10f}  {np.sin(flow.times[k]):.10f}")
print("max deviation:", np.max(np.abs(length - np.sin(flow.times))))
