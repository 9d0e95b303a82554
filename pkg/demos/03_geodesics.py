"""
Geodesics from the spray
========================

Integral curves of the spray S(y, xi) = (y, xi; xi, Gamma_y(xi, xi)) are
geodesics.  In the upper half-plane the geodesic through (0, 1) with velocity
(1, 0) is the unit semicircle (tanh t, sech t), which gives an exact reference.
"""

import numpy as np

from jacobiflow import double_tangent as dt
from jacobiflow import spray_flow as sf
from jacobiflow.zoo import half_plane, sphere

hp = half_plane()
X = dt.TangentVector([0.0, 1.0], [1.0, 0.0])
traj = sf.integrate_geodesic(hp, X, 2.0, 1e-3)
x, y = traj.block(0).T
print("max |x^2 + y^2 - 1|  :", np.max(np.abs(x**2 + y**2 - 1)))
print("max |x - tanh t|     :", np.max(np.abs(x - np.tanh(traj.times))))

# fourth-order convergence: halving h divides the endpoint error by about 16
exact = np.array([np.tanh(1.0), 1 / np.cosh(1.0)])
print("\n     h        error      ratio")
prev = None
for h in [0.1, 0.05, 0.025, 0.0125, 0.00625]:
    err = np.max(np.abs(sf.integrate_geodesic(hp, X, 1.0, h).final[:2] - exact))
    print(f"{h:8.5f}  {err:.3e}  {'' if prev is None else f'{prev / err:6.2f}'}")
    prev = err

# the metric speed is conserved along sphere geodesics
sp = sphere(1.0)
traj = sf.integrate_geodesic(sp, dt.TangentVector([-1.0, 0.0], [0.6, 0.8]), 3.0, 1e-3)
speed = np.array([sp.norm(s[:2], s[2:]) for s in traj.states])
print("\nsphere speed drift:", np.max(np.abs(speed - 1.0)))

# homogeneity and the flow property of geo
Z = dt.TangentVector([0.1, 0.2], [0.4, -0.3])
print("geo(2Z)(0.5) - geo(Z)(1):", sf.geo(sp, dt.TangentVector(Z.base, 2 * Z.vec), 0.5) - sf.geo(sp, Z, 1.0))
mid = sf.geo_velocity(sp, Z, 0.3)
print("geo(geo'(0.3))(0.4) - geo(Z)(0.7):", sf.geo(sp, mid, 0.4) - sf.geo(sp, Z, 0.7))
