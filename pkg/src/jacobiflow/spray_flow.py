"""Spray, geodesic flow and the Jacobi flow ``kappa_TM o TS`` on TTM.

A flow line of ``kappa_TM o TS`` reads ``(c, c'; J, J')`` in a chart: a geodesic
together with a Jacobi field along it.  Two independent oracles are provided for
the J-part: the s-derivative of a one-parameter family of geodesics
(:func:`variation_oracle`) and the covariant Jacobi equation with curvature and
torsion terms (:func:`classical_jacobi_oracle`).

All integrations use classical fixed-step RK4.  Sample times are ``k*h``; when
``t_max`` is not a multiple of ``h`` the last step is shortened to land on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .connection import (
    connector,
    covariant_derivative_along_curve,
    curvature_operator,
    horizontal_lift,
    tangent_connector,
    torsion,
)
from .double_tangent import TangentVector, TTTVector, TTVector, flip, flip_level2
from .errors import DomainError, LeftDomain, StepRejected
from .tangent import as_array, join, primal_array, split

DEFAULT_STEP = 1e-3


@dataclass(frozen=True, eq=False)
class JacobiState:
    """``(x, xi; J, Jdot)``: a point of TTM on a Jacobi flow line."""

    x: np.ndarray
    xi: np.ndarray
    J: np.ndarray
    Jdot: np.ndarray

    def __post_init__(self):
        for name in ("x", "xi", "J", "Jdot"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))

    @property
    def dim(self):
        return len(self.x)

    def as_tt(self):
        return TTVector(self.x, self.xi, self.J, self.Jdot)

    def as_array(self):
        return np.concatenate([self.x, self.xi, self.J, self.Jdot])

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr, dtype=float)
        m = len(arr) // 4
        return cls(arr[:m], arr[m : 2 * m], arr[2 * m : 3 * m], arr[3 * m :])

    @classmethod
    def from_tt(cls, t):
        return cls(t.x, t.xi, t.eta, t.zeta)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples of an integrated curve; ``states[k]`` is the state at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray
    step: float
    method: str
    dim: int

    def block(self, k):
        """The k-th m-block of every state (0: x, 1: xi, 2: J, 3: Jdot or P)."""
        m = self.dim
        return self.states[:, k * m : (k + 1) * m]

    @property
    def final(self):
        return self.states[-1]

    def __len__(self):
        return len(self.times)


# -- spray and the Jacobi vector field -----------------------------------------


def spray(model, X):
    """``S = C o diag``: ``(y, xi) -> (y, xi; xi, Gamma_y(xi, xi))``."""
    return horizontal_lift(model, X.vec, X)


def tangent_spray(model, Y):
    """``TS`` at ``Y`` in TTM, as an element of TT(TM)."""
    lifted = TangentVector(join(Y.x, Y.eta), join(Y.xi, Y.zeta))
    return TTTVector.from_tangent(spray(model, lifted))


def jacobi_field_vector(model, Y):
    """``kappa_TM o TS`` at ``Y``; returns the 4m velocity ``(x', xi', J', Jdot')``."""
    if isinstance(Y, JacobiState):
        Y = Y.as_tt()
    v = flip_level2(tangent_spray(model, Y))
    return np.concatenate([v.c, v.d]).astype(float)


def jacobi_residual(model, Y):
    """``K o TK o TS`` at ``Y``; vanishes identically since ``K o S = 0``."""
    if isinstance(Y, JacobiState):
        Y = Y.as_tt()
    return connector(model, tangent_connector(model, tangent_spray(model, Y))).vec


def geodesic_vector(model, state):
    m = len(state) // 2
    x, xi = state[:m], state[m:]
    return np.concatenate([xi, model.gamma(x, xi, xi)]).astype(float)


# -- integration ---------------------------------------------------------------


def _grid(t_end, h):
    if h <= 0 or not math.isfinite(h):
        raise ValueError(f"step must be positive, got {h}")
    if not math.isfinite(t_end):
        raise ValueError(f"t_max must be finite, got {t_end}")
    n = max(0, math.ceil(abs(t_end) / h - 1e-9))
    sign = 1.0 if t_end >= 0 else -1.0
    times = [sign * k * h for k in range(n)] + [t_end]
    return np.array(times if n else [0.0])


def _rk4(rhs, y0, times, inside, store=True):
    y = np.asarray(y0, dtype=float)
    path = [y] if store else None
    for k in range(1, len(times)):
        t0 = times[k - 1]
        dt = times[k] - t0
        try:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
        except DomainError as exc:
            raise LeftDomain(times[k], getattr(exc, "x", y)) from None
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise StepRejected(times[k])
        if not inside(y):
            raise LeftDomain(times[k], y)
        if store:
            path.append(y)
    return np.array(path) if store else y


def _safe_rhs(model, fn):
    # stage points can leave the chart before the step does
    def rhs(y):
        m = model.dim
        if not model.contains(y[:m]):
            raise LeftDomain(float("nan"), y[:m])
        return fn(y)

    return rhs


def integrate_geodesic(model, X0, t_max, h=DEFAULT_STEP):
    """RK4 on ``(x', xi') = (xi, Gamma_x(xi, xi))``."""
    model.check(X0.base)
    m = model.dim
    times = _grid(t_max, h)
    y0 = np.concatenate([primal_array(X0.base), primal_array(X0.vec)])
    rhs = _safe_rhs(model, lambda y: geodesic_vector(model, y))
    states = _rk4(rhs, y0, times, lambda y: model.contains(y[:m]))
    return Trajectory(times, states, h, "rk4", m)


def geo_velocity(model, X, t, h=DEFAULT_STEP):
    """``Fl^S_t(X)`` as a TangentVector, i.e. ``geo(X)'(t)``.

    Integrates ``n = ceil(|t|/h)`` equal steps of ``t/n``; negative ``t`` runs the flow backwards.
    """
    model.check(X.base)
    m = model.dim
    y = np.concatenate([primal_array(X.base), primal_array(X.vec)])
    if t != 0:
        n = max(1, math.ceil(abs(t) / h - 1e-9))
        times = np.array([t * k / n for k in range(n + 1)])
        rhs = _safe_rhs(model, lambda y: geodesic_vector(model, y))
        y = _rk4(rhs, y, times, lambda y: model.contains(y[:m]), store=False)
    return TangentVector(y[:m], y[m:])


def geo(model, X, t, h=DEFAULT_STEP):
    """``pi_M(Fl^S_t(X))``."""
    return geo_velocity(model, X, t, h).base


def integrate_jacobi_flow(model, Y0, t_max, h=DEFAULT_STEP):
    """RK4 on ``kappa_TM o TS``; states are ``(x, xi, J, Jdot)`` rows."""
    if isinstance(Y0, TTVector):
        Y0 = JacobiState.from_tt(Y0)
    model.check(Y0.x)
    m = model.dim
    times = _grid(t_max, h)
    rhs = _safe_rhs(model, lambda y: jacobi_field_vector(model, TTVector.from_array(y)))
    states = _rk4(rhs, Y0.as_array(), times, lambda y: model.contains(y[:m]))
    return Trajectory(times, states, h, "rk4-jacobi-flow", m)


def covariant_initial_data(model, x, xi, J0, nablaJ0):
    """Chart velocity ``Jdot0 = nablaJ0 + Gamma_x(J0, xi)`` from covariant data."""
    model.check(x)
    return as_array(nablaJ0) + model.gamma(as_array(x), as_array(J0), as_array(xi))


def jacobi_state_from_covariant(model, X0, J0, nablaJ0):
    jdot = covariant_initial_data(model, X0.base, X0.vec, J0, nablaJ0)
    return JacobiState(primal_array(X0.base), primal_array(X0.vec), J0, primal_array(jdot))


def covariant_velocity(model, traj):
    """``nabla_t J = K o kappa_M o Y`` along a Jacobi-flow trajectory, shape ``(N, m)``."""
    rows = [
        primal_array(connector(model, flip(TTVector.from_array(s))).vec) for s in traj.states
    ]
    return np.array(rows)


def variation_oracle(model, X_of_s, t_max, h=DEFAULT_STEP, s_eps=1e-4):
    """Central difference in ``s`` of geodesics started at ``X(s)``."""
    if s_eps <= 0:
        raise ValueError("s_eps must be positive")
    m = model.dim
    plus = integrate_geodesic(model, X_of_s(s_eps), t_max, h)
    minus = integrate_geodesic(model, X_of_s(-s_eps), t_max, h)
    J = (plus.states[:, :m] - minus.states[:, :m]) / (2.0 * s_eps)
    return Trajectory(plus.times, J, h, "variation", m)


def _classical_rhs(model, y):
    m = model.dim
    x, xi, J, P = y[:m], y[m : 2 * m], y[2 * m : 3 * m], y[3 * m :]
    gxx = model.gamma(x, xi, xi)
    jdot = P + model.gamma(x, J, xi)
    pdot = model.gamma(x, P, xi) - curvature_operator(model, x, J, xi, xi)
    # d/dt Tor(J, c') by one tangent evaluation along the current velocity
    tor = torsion(model, join(x, xi), join(J, jdot), join(xi, gxx))
    tor_v, tor_d = split(tor)
    pdot = pdot - covariant_derivative_along_curve(model, x, xi, tor_v, tor_d)
    return np.concatenate([xi, gxx, jdot, pdot]).astype(float)


def classical_jacobi_oracle(model, X0, J0, nablaJ0, t_max, h=DEFAULT_STEP):
    """Integrate ``(c, c', J, P = nabla_t J)`` with

    ``J' = P + Gamma(J, c')`` and
    ``P' = Gamma(P, c') - R(J, c')c' - nabla_t Tor(J, c')``.
    """
    model.check(X0.base)
    m = model.dim
    times = _grid(t_max, h)
    y0 = np.concatenate(
        [primal_array(X0.base), primal_array(X0.vec), np.asarray(J0, float), np.asarray(nablaJ0, float)]
    )
    rhs = _safe_rhs(model, lambda y: _classical_rhs(model, y))
    states = _rk4(rhs, y0, times, lambda y: model.contains(y[:m]))
    return Trajectory(times, states, h, "rk4-classical-jacobi", m)
