"""Seeded invariant suites (``jacobiflow verify``).

Every check draws its probes from ``numpy.random.Generator(PCG64)`` seeded by
``SeedSequence([seed, crc32(check name)])``, so a check's inputs depend only on
the run seed and its own name.  A check reports the worst observed error (or,
for ``compare="min"`` checks, the worst observed ratio) together with the probe
that produced it.

Relative errors are ``max|a - b| / max(1, max|b|)``.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import connection as cn
from . import double_tangent as dt
from . import spray_flow as sf
from .fields import random_polynomial_field, random_scalar_polynomial
from .tangent import cos, exp, join, primal_array, sin, split, sqrt, Tangent
from .zoo import default_zoo

SUITES = ("double_tangent", "connection", "spray_flow")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    observed: float
    tol: float
    compare: str = "max"
    inputs: str = ""

    @property
    def passed(self):
        if not np.isfinite(self.observed):
            return False
        if self.compare == "min":
            return self.observed >= self.tol
        return self.observed <= self.tol

    @property
    def qualified_name(self):
        return f"{self.suite}.{self.name}"

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        rel = ">=" if self.compare == "min" else "<="
        out = f"{status} {self.qualified_name} observed={self.observed:.6e} required {rel} {self.tol:.1e}"
        if not self.passed and self.inputs:
            out += f" inputs={self.inputs}"
        return out


def rel_err(a, b):
    a, b = primal_array(np.ravel(a)), primal_array(np.ravel(b))
    return float(np.max(np.abs(a - b))) / max(1.0, float(np.max(np.abs(b))))


def abs_err(a, b):
    a, b = primal_array(np.ravel(a)), primal_array(np.ravel(b))
    return float(np.max(np.abs(a - b)))


class _Worst:
    """Tracks the worst error seen and the probe that caused it."""

    def __init__(self, compare="max"):
        self.compare = compare
        self.value = -np.inf if compare == "max" else np.inf
        self.inputs = ""

    def add(self, err, inputs):
        worse = err > self.value if self.compare == "max" else err < self.value
        if worse or not np.isfinite(err):
            self.value, self.inputs = err, inputs


def _fmt(*arrays):
    return "[" + "; ".join(str(np.round(primal_array(np.ravel(a)), 6).tolist()) for a in arrays) + "]"


def random_tt(model, rng):
    m = model.dim
    return dt.TTVector(model.sample(rng), *rng.standard_normal((3, m)))


# -- chart maps used for naturality --------------------------------------------


def _map_a(y):
    m = len(y)
    return [sin(y[i]) * y[(i + 1) % m] + exp(0.3 * y[i]) for i in range(m)]


def _map_b(y):
    m = len(y)
    return [cos(y[i]) / (2.0 + y[(i + 1) % m] * y[(i + 1) % m]) for i in range(m)]


def _map_c(y):
    m = len(y)
    return [sqrt(1.0 + y[i] * y[i]) * y[(i + 1) % m] ** 3 - y[i] for i in range(m)]


CHART_MAPS = {"sin-exp": _map_a, "cos-rational": _map_b, "sqrt-cubic": _map_c}


def _linear_bundle_map(f):
    """A fiberwise-linear map of TM in chart form: ``(y, v) -> (f(y), A(y) v)``."""
    def phi(p):
        m = len(p) // 2
        y, v = p[:m], p[m:]
        fy = f(y)
        Av = []
        for i in range(m):
            acc = 0.0
            for j in range(m):
                acc = acc + sin(y[i] + 0.5 * j) * v[j]
            Av.append(acc)
        return list(fy) + Av

    return phi


# -- double_tangent ------------------------------------------------------------


def check_flip_involution(rng, probes, models):
    w = _Worst()
    for _ in range(probes):
        t = random_tt(models[0], rng)
        w.add(abs_err(dt.flip(dt.flip(t)).as_array(), t.as_array()), _fmt(t.as_array()))
    return w


def check_projection_exchange(rng, probes, models):
    w = _Worst()
    for _ in range(probes):
        t = random_tt(models[0], rng)
        f = dt.flip(t)
        err = max(
            abs_err(f.pi_TM().as_array(), t.T_pi_M().as_array()),
            abs_err(f.T_pi_M().as_array(), t.pi_TM().as_array()),
        )
        w.add(err, _fmt(t.as_array()))
    return w


def check_flip_exchanges_additions(rng, probes, models):
    w = _Worst()
    m = models[0].dim
    for _ in range(probes):
        a = random_tt(models[0], rng)
        b = dt.TTVector(a.x, rng.standard_normal(m), a.eta, rng.standard_normal(m))
        lhs = dt.flip(dt.add_over_TM(a, b))
        rhs = dt.add_over_E(dt.flip(a), dt.flip(b))
        c = rng.standard_normal()
        lhs_s, rhs_s = dt.flip(dt.scale_over_TM(c, a)), dt.scale_over_E(c, dt.flip(a))
        w.add(max(abs_err(lhs.as_array(), rhs.as_array()), abs_err(lhs_s.as_array(), rhs_s.as_array())),
              _fmt(a.as_array(), b.as_array()))
    return w


def check_flip_naturality(rng, probes, models):
    w = _Worst()
    m = models[0].dim
    for k in range(probes):
        name, f = list(CHART_MAPS.items())[k % len(CHART_MAPS)]
        t = dt.TTVector(*(0.8 * rng.standard_normal((4, m))))
        lhs = dt.double_tangent_map(f, dt.flip(t)).as_array()
        rhs = dt.flip(dt.double_tangent_map(f, t)).as_array()
        w.add(rel_err(lhs, rhs), f"{name} {_fmt(t.as_array())}")
    return w


def mixed_partials(c, t0, s0):
    """``(d_s d_t c, d_t d_s c)`` at ``(t0, s0)`` as TTVectors (inner derivative first)."""
    t_in = Tangent(Tangent(t0, 1.0), Tangent(0.0, 0.0))
    s_out = Tangent(Tangent(s0, 0.0), Tangent(1.0, 0.0))
    s_in = Tangent(Tangent(s0, 1.0), Tangent(0.0, 0.0))
    t_out = Tangent(Tangent(t0, 0.0), Tangent(1.0, 0.0))
    st = dt.TTVector.from_nested(np.array(c(t_in, s_out), dtype=object))
    ts = dt.TTVector.from_nested(np.array(c(t_out, s_in), dtype=object))
    return st, ts


def check_mixed_partials(rng, probes, models):
    w = _Worst()
    m = models[0].dim
    for k in range(probes):
        name, f = list(CHART_MAPS.items())[k % len(CHART_MAPS)]
        a, b, p = rng.standard_normal((3, m))

        def c(t, s):
            return f([p[i] + a[i] * t + b[i] * s * t + 0.3 * s for i in range(m)])

        t0, s0 = rng.standard_normal(2)
        st, ts = mixed_partials(c, t0, s0)
        w.add(rel_err(ts.as_array(), dt.flip(st).as_array()), f"{name} t={t0:.4f} s={s0:.4f}")
    return w


def check_vl_naturality(rng, probes, models):
    w = _Worst()
    m = models[0].dim
    for k in range(probes):
        name, f = list(CHART_MAPS.items())[k % len(CHART_MAPS)]
        phi = _linear_bundle_map(f)
        y, v = 0.8 * rng.standard_normal((2, m))
        lifted = dt.vertical_lift(dt.TangentVector(y, v))
        # T phi at the point (y, 0) of TM in direction (0, v)
        p = join(np.concatenate([lifted.x, lifted.xi]), np.concatenate([lifted.eta, lifted.zeta]))
        val, der = split(np.array(phi(p), dtype=object))
        lhs = np.concatenate([val, der])
        out = np.array(phi(np.concatenate([y, v])), dtype=float)
        rhs = dt.vertical_lift(dt.TangentVector(out[:m], out[m:])).as_array()
        w.add(rel_err(lhs, rhs), f"{name} {_fmt(y, v)}")
    return w


def check_vertical_roundtrip(rng, probes, models):
    w = _Worst()
    m = models[0].dim
    for _ in range(probes):
        y, u, v = rng.standard_normal((3, m))
        got = dt.vertical_projection(dt.vertical_lift_big(dt.TangentVector(y, u), dt.TangentVector(y, v)))
        w.add(abs_err(got.as_array(), np.concatenate([y, v])), _fmt(y, u, v))
    return w


# -- connection ----------------------------------------------------------------


def check_K_vl(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            v = dt.TangentVector(model.sample(rng), rng.standard_normal(model.dim))
            got = cn.connector(model, dt.vertical_lift(v))
            w.add(abs_err(got.as_array(), v.as_array()), f"{model.name} {_fmt(v.as_array())}")
    return w


def check_C_projections(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            y = model.sample(rng)
            v, xi = rng.standard_normal((2, model.dim))
            c = cn.horizontal_lift(model, xi, dt.TangentVector(y, v))
            err = max(
                abs_err(c.T_pi_M().as_array(), np.concatenate([y, xi])),
                abs_err(c.pi_TM().as_array(), np.concatenate([y, v])),
            )
            w.add(err, f"{model.name} {_fmt(y, v, xi)}")
    return w


def check_K_C_zero(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            y = model.sample(rng)
            v, xi = rng.standard_normal((2, model.dim))
            k = cn.connector(model, cn.horizontal_lift(model, xi, dt.TangentVector(y, v)))
            w.add(float(np.max(np.abs(primal_array(k.vec)))), f"{model.name} {_fmt(y, v, xi)}")
    return w


def check_vlK_TKvl(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            t = random_tt(model, rng)
            lhs = dt.vertical_lift(cn.connector(model, t)).as_array()
            rhs = cn.tangent_connector(model, dt.vertical_lift_tt(t)).as_array()
            w.add(rel_err(lhs, rhs), f"{model.name} {_fmt(t.as_array())}")
    return w


def check_K_fiber_linear(rng, probes, models):
    w = _Worst()
    for model in models:
        m = model.dim
        for _ in range(probes):
            a = random_tt(model, rng)
            c = rng.standard_normal()
            b_e = dt.TTVector(a.x, a.xi, *rng.standard_normal((2, m)))
            b_tm = dt.TTVector(a.x, rng.standard_normal(m), a.eta, rng.standard_normal(m))
            ka = cn.connector(model, a).vec
            errs = [
                rel_err(cn.connector(model, dt.add_over_E(a, b_e)).vec, ka + cn.connector(model, b_e).vec),
                rel_err(cn.connector(model, dt.add_over_TM(a, b_tm)).vec, ka + cn.connector(model, b_tm).vec),
                rel_err(cn.connector(model, dt.scale_over_E(c, a)).vec, c * ka),
                rel_err(cn.connector(model, dt.scale_over_TM(c, a)).vec, c * ka),
            ]
            w.add(max(errs), f"{model.name} {_fmt(a.as_array())}")
    return w


def check_christoffel_bilinear(rng, probes, models):
    w = _Worst()
    for model in models:
        m = model.dim
        for _ in range(probes):
            y = model.sample(rng)
            v1, v2, xi = rng.standard_normal((3, m))
            a, b = rng.standard_normal(2)
            g = model.gamma
            err = max(
                rel_err(g(y, a * v1 + b * v2, xi), a * g(y, v1, xi) + b * g(y, v2, xi)),
                rel_err(g(y, xi, a * v1 + b * v2), a * g(y, xi, v1) + b * g(y, xi, v2)),
            )
            w.add(err, f"{model.name} {_fmt(y, v1, v2, xi)}")
    return w


def check_bracket_via_flip(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, Y = random_polynomial_field(rng, model.dim), random_polynomial_field(rng, model.dim)
            y = model.sample(rng)
            w.add(rel_err(cn.lie_bracket_via_flip(X, Y, y), cn.lie_bracket_ad(X, Y, y)), f"{model.name} {_fmt(y)}")
    return w


def check_curvature_two_routes(rng, probes, models):
    w = _Worst()
    for model in models:
        m = model.dim
        for _ in range(probes):
            X, Y, s = (random_polynomial_field(rng, m) for _ in range(3))
            y = model.sample(rng)
            comm = cn.curvature_commutator_oracle(model, X, Y, s, y)
            op = cn.curvature_operator_route(model, X, Y, s, y)
            const = cn.curvature_operator(model, y, X(y), Y(y), s(y))
            w.add(max(rel_err(op, comm), rel_err(const, comm)), f"{model.name} {_fmt(y)}")
    return w


def check_curvature_antisymmetry(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            y = model.sample(rng)
            u, v, z = rng.standard_normal((3, model.dim))
            lhs = cn.curvature_operator(model, y, u, v, z)
            rhs = -cn.curvature_operator(model, y, v, u, z)
            w.add(rel_err(lhs, rhs), f"{model.name} {_fmt(y, u, v, z)}")
    return w


def check_torsion_two_routes(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, Y = random_polynomial_field(rng, model.dim), random_polynomial_field(rng, model.dim)
            y = model.sample(rng)
            op = cn.torsion_operator_route(model, X, Y, y)
            w.add(rel_err(op, cn.torsion(model, y, X(y), Y(y))), f"{model.name} {_fmt(y)}")
    return w


def check_levi_civita_torsion_free(rng, probes, models):
    w = _Worst()
    w.value = 0.0
    for model in models:
        if model.christoffel.name != "levi-civita":
            continue
        for _ in range(probes):
            y = model.sample(rng)
            u, v = rng.standard_normal((2, model.dim))
            w.add(float(np.max(np.abs(primal_array(cn.torsion(model, y, u, v))))), f"{model.name} {_fmt(y, u, v)}")
    return w


def check_nabla_tensorial_in_X(rng, probes, models):
    w = _Worst()
    for model in models:
        m = model.dim
        for _ in range(probes):
            X, s = random_polynomial_field(rng, m), random_polynomial_field(rng, m)
            h = random_scalar_polynomial(rng, m)
            y = model.sample(rng)
            hX = lambda q: [h(q) * c for c in X(q)]
            lhs = cn.covariant_derivative_field(model, hX, s, y)
            rhs = h(y) * cn.covariant_derivative_field(model, X, s, y)
            w.add(rel_err(lhs, rhs), f"{model.name} {_fmt(y)}")
    return w


def check_nabla_leibniz(rng, probes, models):
    w = _Worst()
    for model in models:
        m = model.dim
        for _ in range(probes):
            X, s = random_polynomial_field(rng, m), random_polynomial_field(rng, m)
            h = random_scalar_polynomial(rng, m)
            y = model.sample(rng)
            hs = lambda q: [h(q) * c for c in s(q)]
            dh = dt.tangent_map(lambda q: [h(q)], dt.TangentVector(y, X(y))).vec[0]
            lhs = cn.covariant_derivative_field(model, X, hs, y)
            rhs = dh * np.asarray(s(y), float) + h(y) * cn.covariant_derivative_field(model, X, s, y)
            w.add(rel_err(lhs, rhs), f"{model.name} {_fmt(y)}")
    return w


# -- spray_flow ----------------------------------------------------------------


def check_spray_projections(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X = dt.TangentVector(model.sample(rng), rng.standard_normal(model.dim))
            S = sf.spray(model, X)
            err = max(abs_err(S.pi_TM().as_array(), X.as_array()), abs_err(S.T_pi_M().as_array(), X.as_array()))
            w.add(err, f"{model.name} {_fmt(X.as_array())}")
    return w


def check_K_S_zero(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X = dt.TangentVector(model.sample(rng), rng.standard_normal(model.dim))
            w.add(float(np.max(np.abs(primal_array(cn.connector(model, sf.spray(model, X)).vec)))),
                  f"{model.name} {_fmt(X.as_array())}")
    return w


def check_spray_quadratic(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X = dt.TangentVector(model.sample(rng), rng.standard_normal(model.dim))
            t = rng.uniform(-2.0, 2.0)
            lhs = sf.spray(model, dt.TangentVector(X.base, t * X.vec))
            rhs = dt.scale_over_TM(t, dt.scale_over_E(t, sf.spray(model, X)))
            w.add(rel_err(lhs.as_array(), rhs.as_array()), f"{model.name} t={t:.4f} {_fmt(X.as_array())}")
    return w


def check_jacobi_residual(rng, probes, models):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            Y = random_tt(model, rng)
            w.add(float(np.max(np.abs(primal_array(sf.jacobi_residual(model, Y))))), f"{model.name} {_fmt(Y.as_array())}")
    return w


def _random_start(model, rng, speed=0.5):
    return dt.TangentVector(model.sample(rng), speed * rng.standard_normal(model.dim))


def check_geo_homogeneity(rng, probes, models, h=1e-3):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X = _random_start(model, rng)
            lhs = sf.geo(model, dt.TangentVector(X.base, 2.0 * X.vec), 0.25, h)
            rhs = sf.geo(model, X, 0.5, h)
            w.add(abs_err(lhs, rhs), f"{model.name} {_fmt(X.as_array())}")
    return w


def check_geo_flow_property(rng, probes, models, h=1e-3):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X = _random_start(model, rng)
            mid = sf.geo_velocity(model, X, 0.3, h)
            w.add(abs_err(sf.geo(model, mid, 0.4, h), sf.geo(model, X, 0.7, h)), f"{model.name} {_fmt(X.as_array())}")
    return w


def jacobi_case(model, rng):
    X = _random_start(model, rng)
    J0, nJ0 = 0.5 * rng.standard_normal((2, model.dim))
    return X, J0, nJ0


def _flow_and_oracles(model, X, J0, nJ0, t_max, h, s_eps, want=("variation", "classical")):
    Y0 = sf.jacobi_state_from_covariant(model, X, J0, nJ0)
    flow = sf.integrate_jacobi_flow(model, Y0, t_max, h)
    out = {"flow": flow, "Y0": Y0}
    if "variation" in want:
        out["variation"] = sf.variation_oracle(
            model,
            lambda s: dt.TangentVector(Y0.x + s * Y0.J, Y0.xi + s * Y0.Jdot),
            t_max, h, s_eps,
        )
    if "classical" in want:
        out["classical"] = sf.classical_jacobi_oracle(model, X, J0, nJ0, t_max, h)
    return out


def check_jacobi_vs_variation(rng, probes, models, t_max=0.5, h=1e-3, s_eps=1e-4):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, J0, nJ0 = jacobi_case(model, rng)
            r = _flow_and_oracles(model, X, J0, nJ0, t_max, h, s_eps, want=("variation",))
            w.add(abs_err(r["flow"].block(2), r["variation"].states), f"{model.name} {_fmt(X.as_array(), J0, nJ0)}")
    return w


def check_jacobi_vs_classical(rng, probes, models, t_max=0.5, h=1e-3):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, J0, nJ0 = jacobi_case(model, rng)
            r = _flow_and_oracles(model, X, J0, nJ0, t_max, h, None, want=("classical",))
            flow, cl = r["flow"], r["classical"]
            err = max(
                abs_err(flow.block(2), cl.block(2)),
                abs_err(sf.covariant_velocity(model, flow), cl.block(3)),
            )
            w.add(err, f"{model.name} {_fmt(X.as_array(), J0, nJ0)}")
    return w


def check_residual_along_flow(rng, probes, models, t_max=0.5, h=1e-3, stride=25):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, J0, nJ0 = jacobi_case(model, rng)
            flow = sf.integrate_jacobi_flow(model, sf.jacobi_state_from_covariant(model, X, J0, nJ0), t_max, h)
            err = max(
                float(np.max(np.abs(primal_array(sf.jacobi_residual(model, dt.TTVector.from_array(s))))))
                for s in flow.states[::stride]
            )
            w.add(err, f"{model.name} {_fmt(X.as_array(), J0, nJ0)}")
    return w


def check_geodesic_subsystem_bitwise(rng, probes, models, t_max=0.25, h=1e-3):
    w = _Worst()
    for model in models:
        for _ in range(probes):
            X, J0, nJ0 = jacobi_case(model, rng)
            flow = sf.integrate_jacobi_flow(model, sf.jacobi_state_from_covariant(model, X, J0, nJ0), t_max, h)
            geod = sf.integrate_geodesic(model, X, t_max, h)
            m = model.dim
            w.add(0.0 if np.array_equal(flow.states[:, : 2 * m], geod.states) else
                  abs_err(flow.states[:, : 2 * m], geod.states) + 1e-300,
                  f"{model.name} {_fmt(X.as_array())}")
    return w


def half_plane_semicircle_errors(steps, t_max=1.0):
    """RK4 endpoint errors on the geodesic ``(tanh t, sech t)`` of the half-plane."""
    from .zoo import half_plane

    model = half_plane()
    X = dt.TangentVector([0.0, 1.0], [1.0, 0.0])
    exact = np.array([np.tanh(t_max), 1.0 / np.cosh(t_max)])
    return [float(np.max(np.abs(sf.integrate_geodesic(model, X, t_max, h).final[:2] - exact))) for h in steps]


def check_rk4_order(rng, probes, models):
    w = _Worst(compare="min")
    steps = [0.05, 0.025, 0.0125, 0.00625]
    errs = half_plane_semicircle_errors(steps)
    for h, e0, e1 in zip(steps, errs, errs[1:]):
        w.add(e0 / e1, f"h={h} -> {h / 2}: {e0:.3e} -> {e1:.3e}")
    return w


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    fn: object
    tol: float
    probes: int
    compare: str = "max"


CHECKS = [
    Check("double_tangent", "flip_involution", check_flip_involution, 0.0, 1000),
    Check("double_tangent", "projection_exchange", check_projection_exchange, 0.0, 1000),
    Check("double_tangent", "flip_exchanges_additions", check_flip_exchanges_additions, 1e-12, 1000),
    Check("double_tangent", "flip_naturality", check_flip_naturality, 1e-12, 200),
    Check("double_tangent", "mixed_partials", check_mixed_partials, 1e-12, 200),
    Check("double_tangent", "vl_naturality", check_vl_naturality, 1e-12, 200),
    Check("double_tangent", "vertical_roundtrip", check_vertical_roundtrip, 0.0, 1000),
    Check("connection", "K_vl_identity", check_K_vl, 1e-13, 200),
    Check("connection", "C_projections", check_C_projections, 0.0, 200),
    Check("connection", "K_C_zero", check_K_C_zero, 1e-12, 200),
    Check("connection", "vlK_equals_TKvl", check_vlK_TKvl, 1e-12, 200),
    Check("connection", "K_fiber_linear", check_K_fiber_linear, 1e-12, 200),
    Check("connection", "christoffel_bilinear", check_christoffel_bilinear, 1e-12, 200),
    Check("connection", "bracket_via_flip", check_bracket_via_flip, 1e-12, 100),
    Check("connection", "curvature_two_routes", check_curvature_two_routes, 1e-9, 20),
    Check("connection", "curvature_antisymmetry", check_curvature_antisymmetry, 1e-10, 50),
    Check("connection", "torsion_two_routes", check_torsion_two_routes, 1e-12, 100),
    Check("connection", "levi_civita_torsion_free", check_levi_civita_torsion_free, 1e-12, 100),
    Check("connection", "nabla_tensorial_in_X", check_nabla_tensorial_in_X, 1e-12, 50),
    Check("connection", "nabla_leibniz", check_nabla_leibniz, 1e-12, 50),
    Check("spray_flow", "spray_projections", check_spray_projections, 0.0, 200),
    Check("spray_flow", "K_S_zero", check_K_S_zero, 1e-12, 200),
    Check("spray_flow", "spray_quadratic", check_spray_quadratic, 1e-12, 200),
    Check("spray_flow", "jacobi_residual", check_jacobi_residual, 1e-12, 100),
    Check("spray_flow", "geo_homogeneity", check_geo_homogeneity, 1e-7, 2),
    Check("spray_flow", "geo_flow_property", check_geo_flow_property, 1e-7, 2),
    Check("spray_flow", "geodesic_subsystem_bitwise", check_geodesic_subsystem_bitwise, 0.0, 1),
    Check("spray_flow", "jacobi_vs_variation", check_jacobi_vs_variation, 1e-5, 1),
    Check("spray_flow", "jacobi_vs_classical", check_jacobi_vs_classical, 1e-6, 1),
    Check("spray_flow", "residual_along_flow", check_residual_along_flow, 1e-12, 1),
    Check("spray_flow", "rk4_order", check_rk4_order, 14.0, 1, compare="min"),
]


def select(suite="all"):
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")
    return [c for c in CHECKS if suite == "all" or c.suite == suite]


def check_rng(seed, name):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, zlib.crc32(name.encode())])))


def run_check(check, seed, probes=None, tol=None, models=None):
    models = default_zoo() if models is None else models
    if check.suite == "double_tangent":
        models = [m for m in models if m.dim >= 2][:1] or models[:1]
    rng = check_rng(seed, f"{check.suite}.{check.name}")
    worst = check.fn(rng, probes or check.probes, models)
    return CheckResult(
        check.suite, check.name, float(worst.value), check.tol if tol is None else tol, check.compare, worst.inputs
    )


def _run_named(args):
    name, seed, probes, tol, spec_dicts = args
    from .zoo import build

    check = next(c for c in CHECKS if f"{c.suite}.{c.name}" == name)
    models = None if spec_dicts is None else [build(d) for d in spec_dicts]
    return run_check(check, seed, probes, tol, models)


def _lookup_tol(check, overrides):
    for key in (f"{check.suite}.{check.name}", check.name):
        if key in overrides:
            return overrides[key]
    return None


def run_suite(suite="all", seed=42, probes=None, tol_overrides=None, parallel=1, model_specs=None):
    """Run a suite; results come back in registry order whatever ``parallel`` is."""
    overrides = dict(tol_overrides or {})
    checks = select(suite)
    known = {f"{c.suite}.{c.name}" for c in CHECKS} | {c.name for c in CHECKS}
    unknown = sorted(set(overrides) - known)
    if unknown:
        raise ValueError(f"unknown tolerance name(s): {', '.join(unknown)}")
    spec_dicts = None if model_specs is None else [s.to_dict() for s in model_specs]
    jobs = [(f"{c.suite}.{c.name}", seed, probes, _lookup_tol(c, overrides), spec_dicts) for c in checks]
    if parallel and parallel > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            return list(pool.map(_run_named, jobs))
    return [_run_named(j) for j in jobs]


def format_report(results, seed, suite):
    lines = [f"# jacobiflow verify suite={suite} seed={seed}"]
    lines += [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"# {len(results) - failed}/{len(results)} passed")
    return "\n".join(lines) + "\n"
