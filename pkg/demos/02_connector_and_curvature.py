"""
Connector, horizontal lift and curvature on the round sphere
============================================================

The sphere of radius 1 in its stereographic chart, with the Levi-Civita
Christoffel map built from the metric by forward-mode differentiation.
"""

import numpy as np

from jacobiflow import connection as cn
from jacobiflow import double_tangent as dt
from jacobiflow.fields import random_polynomial_field
from jacobiflow.zoo import sphere

model = sphere(1.0)
rng = np.random.default_rng(1)
y = np.array([0.3, -0.2])
v, xi = rng.standard_normal((2, 2))

# K kills horizontal vectors and inverts the vertical lift
H = cn.horizontal_lift(model, xi, dt.TangentVector(y, v))
print("K(C(xi, v)) =", cn.connector(model, H).vec)
print("K(vl(v)) - v =", cn.connector(model, dt.vertical_lift(dt.TangentVector(y, v))).vec - v)

# curvature two ways: covariant derivatives of vector fields, and the operator
# built from the connector, its tangent map and the level-2 flip
X, Y, s = (random_polynomial_field(rng, 2) for _ in range(3))
comm = cn.curvature_commutator_oracle(model, X, Y, s, y)
oper = cn.curvature_operator_route(model, X, Y, s, y)
print("R via commutators:", comm)
print("R via operators  :", oper)
print("difference       :", np.max(np.abs(comm - oper)))

# only the values of X, Y and s at the point matter
print("R(X(y), Y(y)) s(y):", cn.curvature_operator(model, y, X(y), Y(y), s(y)))

# sectional curvature of the unit sphere is 1 everywhere
for _ in range(3):
    p = model.sample(rng)
    u, w = rng.standard_normal((2, 2))
    print(f"K at {p.round(3)} = {cn.sectional_curvature(model, p, u, w):.15f}")

# the bracket of vector fields from the flip, compared with the Jacobian formula
print("[X, Y] via flip:", cn.lie_bracket_via_flip(X, Y, y))
print("[X, Y] via AD  :", cn.lie_bracket_ad(X, Y, y))
