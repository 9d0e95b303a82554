"""Linear connections on TM through the connector ``K`` and horizontal lift ``C``.

Christoffel convention: ``Gamma_y(v, xi)`` parametrizes the horizontal bundle,

    C((y, xi), (y, v)) = (y, v; xi, Gamma_y(v, xi))
    K(y, v; xi, w)     = (y, w - Gamma_y(v, xi))

so it is the negative of the classical symbol and geodesics solve
``c'' = Gamma_c(c', c')``.

Vector fields, sections and metrics are callables ``y -> sequence`` written over
generic scalars (see :mod:`jacobiflow.tangent`); every derivative used here is
obtained by evaluating them over tangent scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .double_tangent import (
    TangentVector,
    TTVector,
    TTTVector,
    flip,
    flip_level2,
    section_double_tangent,
    section_tangent,
    sub_over_E,
    tangent_map,
    vertical_projection,
)
from .errors import DomainError, EvaluationError, MetricError
from .tangent import Tangent, as_array, join, primal, primal_array, split


class ChristoffelMap:
    """``(y, v, xi) -> Gamma_y(v, xi)``, smooth in ``y`` and bilinear in ``(v, xi)``."""

    def __init__(self, fn, name=""):
        self.fn = fn
        self.name = name

    def __call__(self, y, v, xi):
        return as_array(self.fn(y, v, xi))

    def __repr__(self):
        return f"ChristoffelMap({self.name or self.fn!r})"


@dataclass(frozen=True, eq=False)
class ManifoldModel:
    """A single-chart manifold with a linear connection on TM.

    ``domain`` is a predicate on float coordinate arrays.  ``metric`` is kept
    when the connection came from one (norms in tests and the CLI need it);
    ``sample`` draws a point well inside the domain from a numpy Generator.
    """

    dim: int
    domain: Callable[[np.ndarray], bool]
    christoffel: ChristoffelMap
    name: str = ""
    metric: Optional[Callable] = None
    sample: Optional[Callable] = field(default=None, repr=False)

    def contains(self, x):
        p = primal_array(x)
        return len(p) == self.dim and bool(np.all(np.isfinite(p))) and bool(self.domain(p))

    def check(self, x):
        if not self.contains(x):
            raise DomainError(f"{primal_array(x).tolist()} is outside the domain of {self.name}")

    def gamma(self, y, v, xi):
        return self.christoffel(y, v, xi)

    def metric_matrix(self, x):
        if self.metric is None:
            raise ValueError(f"model {self.name} carries no metric")
        g = self.metric(np.asarray(x, dtype=float))
        return np.array([[primal(e) for e in row] for row in g], dtype=float)

    def inner(self, x, a, b):
        return float(np.asarray(a) @ self.metric_matrix(x) @ np.asarray(b))

    def norm(self, x, a):
        return float(np.sqrt(self.inner(x, a, a)))


# -- connector and horizontal lift ---------------------------------------------


def connector(model, t):
    """``K(x, xi; eta, zeta) = (x, zeta - Gamma_x(xi, eta))``."""
    model.check(t.x)
    return TangentVector(t.x, t.zeta - model.gamma(t.x, t.xi, t.eta))


def horizontal_lift(model, xi, at):
    """``C(xi, (y, v)) = (y, v; xi, Gamma_y(v, xi))``."""
    model.check(at.base)
    xi = as_array(xi)
    return TTVector(at.base, at.vec, xi, model.gamma(at.base, at.vec, xi))


def tangent_connector(model, big):
    """``TK``: TT(TM) -> TTM, the tangent map of the connector.

    ``big`` is read as the point ``(a; b)`` of TTM with tangent ``(c; d)``.
    """
    p, q = big.base_tt(), big.fiber_tt()
    lifted = TTVector(join(p.x, q.x), join(p.xi, q.xi), join(p.eta, q.eta), join(p.zeta, q.zeta))
    k = connector(model, lifted)
    base, dbase = split(k.base)
    vec, dvec = split(k.vec)
    return TTVector(base, vec, dbase, dvec)


# -- covariant derivatives -----------------------------------------------------


def covariant_derivative_field(model, X, s, at):
    """``nabla_X s = K o Ts o X`` at ``at``; ``X`` and ``s`` are vector fields."""
    at = as_array(at)
    ts = section_tangent(s, TangentVector(at, as_array(X(at))))
    return connector(model, ts).vec


def covariant_derivative_along_curve(model, x, c_dot, J, J_dot):
    """``K(x, J; c', J') = J' - Gamma_x(J, c')``."""
    return connector(model, TTVector(x, J, c_dot, J_dot)).vec


# -- brackets ------------------------------------------------------------------


def lie_bracket_ad(X, Y, at):
    """``[X, Y] = DY.X - DX.Y`` by forward differentiation."""
    at = as_array(at)
    dy = tangent_map(Y, TangentVector(at, as_array(X(at)))).vec
    dx = tangent_map(X, TangentVector(at, as_array(Y(at)))).vec
    return dy - dx


def lie_bracket_via_flip(X, Y, at, tol=None):
    """``[X, Y] = vpr(TY o X - kappa o TX o Y)``, subtraction in the ``pi_TM`` fibers."""
    at = as_array(at)
    ty_x = section_tangent(Y, TangentVector(at, as_array(X(at))))
    tx_y = section_tangent(X, TangentVector(at, as_array(Y(at))))
    diff = sub_over_E(ty_x, flip(tx_y))
    if tol is None:
        return vertical_projection(diff).vec
    return vertical_projection(diff, tol).vec


# -- curvature -----------------------------------------------------------------


def curvature_operator_route(model, X, Y, s, at):
    """``(K o TK o kappa_TM - K o TK) o TTs o TX o Y`` at ``at``."""
    at = as_array(at)
    tx_y = section_tangent(X, TangentVector(at, as_array(Y(at))))
    tts = section_double_tangent(s, tx_y)
    flipped = connector(model, tangent_connector(model, flip_level2(tts))).vec
    plain = connector(model, tangent_connector(model, tts)).vec
    return flipped - plain


def curvature_operator(model, x, u, v, w):
    """``R(u, v) w`` at ``x``, via the operator route with constant extensions."""
    u, v, w = as_array(u), as_array(v), as_array(w)
    return curvature_operator_route(model, lambda y: u, lambda y: v, lambda y: w, x)


def curvature_commutator_oracle(model, X, Y, s, at):
    """``nabla_X nabla_Y s - nabla_Y nabla_X s - nabla_[X,Y] s`` at ``at``."""
    def nabla_y_s(y):
        return covariant_derivative_field(model, Y, s, y)

    def nabla_x_s(y):
        return covariant_derivative_field(model, X, s, y)

    def bracket(y):
        return lie_bracket_ad(X, Y, y)

    return (
        covariant_derivative_field(model, X, nabla_y_s, at)
        - covariant_derivative_field(model, Y, nabla_x_s, at)
        - covariant_derivative_field(model, bracket, s, at)
    )


def riemann_tensor(model, x):
    """All components ``R(e_i, e_j) e_k`` at ``x``, shape ``(m, m, m, m)`` with the output index last."""
    m = model.dim
    eye = np.eye(m)
    out = np.zeros((m, m, m, m))
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(m):
                r = primal_array(curvature_operator(model, x, eye[i], eye[j], eye[k]))
                out[i, j, k] = r
                out[j, i, k] = -r
    return out


def sectional_curvature(model, x, u, v):
    """``<R(u, v) v, u> / (|u|^2 |v|^2 - <u, v>^2)`` for a model with a metric."""
    r = primal_array(curvature_operator(model, x, u, v, v))
    num = model.inner(x, r, u)
    den = model.inner(x, u, u) * model.inner(x, v, v) - model.inner(x, u, v) ** 2
    return num / den


# -- torsion -------------------------------------------------------------------


def torsion(model, x, u, v):
    """``Tor(u, v) = Gamma_x(u, v) - Gamma_x(v, u)``."""
    model.check(x)
    u, v = as_array(u), as_array(v)
    return model.gamma(x, u, v) - model.gamma(x, v, u)


def torsion_operator_route(model, X, Y, at):
    """``(K o kappa_M - K) o TX o Y`` at ``at``."""
    at = as_array(at)
    tx_y = section_tangent(X, TangentVector(at, as_array(Y(at))))
    return connector(model, flip(tx_y)).vec - connector(model, tx_y).vec


# -- Levi-Civita ---------------------------------------------------------------


def _slots(e):
    if type(e) is Tangent:
        return e.value, e.deriv
    return e, 0.0


def _metric_jet(metric, y, m):
    """Metric entries and all first partials at ``y`` (any depth)."""
    g = None
    dg = []
    for l in range(m):
        yl = [Tangent(y[k], 1.0 if k == l else 0.0) for k in range(m)]
        G = metric(yl)
        if g is None:
            g = [[_slots(G[j][k])[0] for k in range(m)] for j in range(m)]
        dg.append([[_slots(G[j][k])[1] for k in range(m)] for j in range(m)])
    return g, dg


def _solve(a, b):
    """Gaussian elimination on generic scalars; ``a`` is small and SPD."""
    n = len(b)
    a = [list(row) for row in a]
    b = list(b)
    for col in range(n):
        piv = a[col][col]
        if primal(piv) == 0.0:
            raise EvaluationError("singular metric", 0)
        for row in range(col + 1, n):
            if _is_zero_const(a[row][col]):
                continue
            f = a[row][col] / piv
            for k in range(col, n):
                a[row][k] = a[row][k] - f * a[col][k]
            b[row] = b[row] - f * b[col]
    x = [0.0] * n
    for row in range(n - 1, -1, -1):
        acc = b[row]
        for k in range(row + 1, n):
            if not (_is_zero_const(a[row][k]) or _is_zero_const(x[k])):
                acc = acc - a[row][k] * x[k]
        x[row] = acc / a[row][row]
    return x


def check_metric(metric, points, rtol=1e-12):
    """Raise :class:`MetricError` unless the metric is symmetric positive definite at ``points``."""
    for p in points:
        g = np.array([[primal(e) for e in row] for row in metric(np.asarray(p, float))], float)
        if not np.all(np.isfinite(g)):
            raise MetricError(f"metric not finite at {list(p)}")
        if np.max(np.abs(g - g.T)) > rtol * (1.0 + np.max(np.abs(g))):
            raise MetricError(f"metric not symmetric at {list(p)}")
        if np.min(np.linalg.eigvalsh(g)) <= 0.0:
            raise MetricError(f"metric not positive definite at {list(p)}")


def _is_zero_const(x):
    return type(x) is not Tangent and x == 0.0


def _sum(terms):
    acc = 0.0
    for t in terms:
        if not _is_zero_const(t):
            acc = acc + t
    return acc


def _prod(a, b):
    if _is_zero_const(a) or _is_zero_const(b):
        return 0.0
    return a * b


def _fingerprint(e):
    if type(e) is Tangent:
        return (_fingerprint(e.value), _fingerprint(e.deriv))
    return float(e)


def _rebuild(key):
    if type(key) is tuple:
        v, d = _rebuild(key[0]), _rebuild(key[1])
        return Tangent(v, d)
    return key


def levi_civita_from_metric(metric, dim, samples=()):
    """Christoffel map of the Levi-Civita connection of ``metric``, horizontal-bundle sign.

    ``Gamma_y(v, xi)^i = -1/2 g^{il} (d_j g_lk + d_k g_lj - d_l g_jk) v^j xi^k``,
    with the partials from tangent evaluation of ``metric``.  The symbol tensor
    is cached per point (keyed by the full nested value of ``y``).
    """
    check_metric(metric, samples)
    m = dim

    @lru_cache(maxsize=32)
    def symbols(key):
        y = [_rebuild(k) for k in key]
        g, dg = _metric_jet(metric, y, m)
        try:
            ginv = [_solve(g, [1.0 if r == l else 0.0 for r in range(m)]) for l in range(m)]
        except EvaluationError as exc:
            raise MetricError(f"metric not invertible at {[primal(c) for c in y]}") from exc
        first = [
            {(j, k): _sum((dg[j][l][k], dg[k][l][j], -dg[l][j][k])) for j in range(m) for k in range(j, m)}
            for l in range(m)
        ]
        out = [[[0.0] * m for _ in range(m)] for _ in range(m)]
        for i in range(m):
            for j in range(m):
                for k in range(j, m):
                    acc = _sum(_prod(ginv[l][i], first[l][j, k]) for l in range(m))
                    out[i][j][k] = out[i][k][j] = _prod(-0.5, acc)
        return out

    def gamma(y, v, xi):
        sym = symbols(tuple(_fingerprint(c) for c in y))
        res = []
        for i in range(m):
            acc = 0.0
            for j in range(m):
                for k in range(m):
                    c = sym[i][j][k]
                    if not _is_zero_const(c):
                        acc = acc + c * v[j] * xi[k]
            res.append(acc)
        return res

    return ChristoffelMap(gamma, name="levi-civita")
