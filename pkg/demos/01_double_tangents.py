"""
Double tangent vectors and the flip
===================================

A point of TTM in a chart is four m-blocks (x, xi; eta, zeta).  Evaluating a
chart map over nested tangent scalars gives its second tangent map, and the
flip swaps the two middle blocks.
"""

import numpy as np

from jacobiflow import double_tangent as dt
from jacobiflow.tangent import Tangent, cos, sin

rng = np.random.default_rng(0)

# a nonlinear map of the plane
def f(y):
    return [sin(y[0]) * y[1], cos(y[1]) + y[0] * y[0]]

t = dt.TTVector(*rng.standard_normal((4, 2)))
print("t          ", t.as_array().round(4))
print("flip(t)    ", dt.flip(t).as_array().round(4))

# TTf commutes with the flip: the second derivative of f is symmetric
lhs = dt.double_tangent_map(f, dt.flip(t)).as_array()
rhs = dt.flip(dt.double_tangent_map(f, t)).as_array()
print("TTf.flip - flip.TTf:", np.max(np.abs(lhs - rhs)))

# the two projections TTM -> TM trade places under the flip
print("pi_TM(flip t) =", dt.flip(t).pi_TM().as_array().round(4))
print("T pi_M(t)     =", t.T_pi_M().as_array().round(4))

# mixed partials of a two-parameter surface c(t, s), evaluated both ways round
def c(tt, ss):
    return f([0.3 + tt, -0.2 + ss * tt])

inner_t = Tangent(Tangent(0.5, 1.0), Tangent(0.0, 0.0))
outer_s = Tangent(Tangent(0.7, 0.0), Tangent(1.0, 0.0))
d_s_d_t = dt.TTVector.from_nested(np.array(c(inner_t, outer_s), dtype=object))
inner_s = Tangent(Tangent(0.7, 1.0), Tangent(0.0, 0.0))
outer_t = Tangent(Tangent(0.5, 0.0), Tangent(1.0, 0.0))
d_t_d_s = dt.TTVector.from_nested(np.array(c(outer_t, inner_s), dtype=object))
print("flip(d_s d_t c) - d_t d_s c:", np.max(np.abs(dt.flip(d_s_d_t).as_array() - d_t_d_s.as_array())))

# vertical vectors: (y, 0; 0, v) and its projection back
v = dt.TangentVector([1.0, 2.0], [0.5, -1.0])
print("vertical lift:", dt.vertical_lift(v).as_array())
print("projection   :", dt.vertical_projection(dt.vertical_lift(v)).as_array())
