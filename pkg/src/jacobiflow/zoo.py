"""Single-chart models with known geometry.

========================  =====================================================
kind                      connection
========================  =====================================================
``euclidean``             Gamma = 0 on R^m
``sphere``                Levi-Civita of g = 4R^4/(R^2+|x|^2)^2 delta (stereographic)
``half_plane``            Levi-Civita of g = delta / x_m^2 on {x_m > 0}
``torsion_demo``          Gamma_y(v, xi) = beta (v1 xi2 - v2 xi1) e2 on R^2
``custom_metric``         Levi-Civita of a rational metric given as JSON data
========================  =====================================================
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .connection import ChristoffelMap, ManifoldModel, check_metric, levi_civita_from_metric
from .errors import MetricError, ModelSpecError
from .tangent import powi

KINDS = ("euclidean", "sphere", "half_plane", "torsion_demo", "custom_metric")
MAX_DIM = 4

_ALIASES = {"custom": "custom_metric", "half-plane": "half_plane", "torsion-demo": "torsion_demo"}


def normalize_kind(kind):
    kind = _ALIASES.get(kind, kind).replace("-", "_")
    if kind not in KINDS:
        raise ModelSpecError(f"unknown model kind {kind!r}; expected one of {', '.join(KINDS)}")
    return kind


@dataclass(frozen=True)
class ModelSpec:
    kind: str
    dim: int = 2
    radius: float = 1.0
    beta: float = 1.0
    pole_guard: float | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", normalize_kind(self.kind))
        if not 1 <= int(self.dim) <= MAX_DIM:
            raise ModelSpecError(f"dim must be in 1..{MAX_DIM}, got {self.dim}")
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise ModelSpecError(f"radius must be positive, got {self.radius}")
        if not np.isfinite(self.beta):
            raise ModelSpecError("beta must be finite")
        if self.kind == "torsion_demo" and self.dim != 2:
            raise ModelSpecError("torsion_demo lives on R^2")
        if self.kind == "half_plane" and self.dim < 2:
            raise ModelSpecError("half_plane needs dim >= 2")

    @classmethod
    def from_dict(cls, data):
        """Parse ``{"kind": ..., "dim": m, "params": {...}}``."""
        if "kind" not in data:
            raise ModelSpecError("model config needs a 'kind'")
        params = dict(data.get("params", {}))
        kw = {}
        for key in ("radius", "beta", "pole_guard"):
            if key in params:
                kw[key] = float(params.pop(key))
        return cls(kind=data["kind"], dim=int(data.get("dim", 2)), params=params, **kw)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        params = dict(self.params)
        if self.kind == "sphere":
            params["radius"] = self.radius
            if self.pole_guard is not None:
                params["pole_guard"] = self.pole_guard
        if self.kind == "torsion_demo":
            params["beta"] = self.beta
        return {"kind": self.kind, "dim": self.dim, "params": params}


# -- metrics -------------------------------------------------------------------


def _diag(c, m):
    return [[c if i == j else 0.0 for j in range(m)] for i in range(m)]


def sphere_metric(radius, m):
    r2 = radius * radius
    scale = 4.0 * r2 * r2

    def metric(y):
        s = r2
        for yi in y:
            s = s + yi * yi
        return _diag(scale / powi(s, 2), m)

    return metric


def half_plane_metric(m):
    def metric(y):
        return _diag(1.0 / powi(y[m - 1], 2), m)

    return metric


def _poly(terms, m):
    terms = [(float(c), tuple(int(k) for k in e)) for c, e in terms]
    for _, e in terms:
        if len(e) != m:
            raise ModelSpecError(f"monomial exponent {list(e)} does not have length {m}")

    def p(y):
        acc = 0.0
        for c, e in terms:
            mono = 1.0
            for yi, k in zip(y, e):
                if k:
                    mono = mono * powi(yi, k)
            acc = acc + c * mono
        return acc

    return p


def rational_metric(params, m):
    """Metric from JSON polynomial data.

    ``family = "conformal"``: ``numerator`` is one polynomial, ``g = num/den * I``.
    ``family = "rational"``: ``numerator`` is an m x m array of polynomials, ``g = num/den``.
    A polynomial is a list of ``[coefficient, [e_1, ..., e_m]]`` terms.
    """
    family = params.get("family", "conformal")
    den = _poly(params.get("denominator", [[1.0, [0] * m]]), m)
    if "numerator" not in params:
        raise ModelSpecError("custom metric needs a 'numerator'")
    if family == "conformal":
        num = _poly(params["numerator"], m)

        def metric(y):
            return _diag(num(y) / den(y), m)

    elif family == "rational":
        rows = params["numerator"]
        if len(rows) != m or any(len(r) != m for r in rows):
            raise ModelSpecError(f"rational numerator must be {m} x {m}")
        nums = [[_poly(rows[i][j], m) for j in range(m)] for i in range(m)]

        def metric(y):
            d = den(y)
            return [[nums[i][j](y) / d for j in range(m)] for i in range(m)]

    else:
        raise ModelSpecError(f"unknown metric family {family!r}")
    return metric, den


# -- builders ------------------------------------------------------------------


def _box_sampler(lo, hi):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    return lambda rng: lo + (hi - lo) * rng.random(len(lo))


def _sample_points(sampler, n=8, seed=0):
    rng = np.random.default_rng(seed)
    return [sampler(rng) for _ in range(n)]


def euclidean(dim=2):
    return ManifoldModel(
        dim=dim,
        domain=lambda x: True,
        christoffel=ChristoffelMap(lambda y, v, xi: [0.0] * dim, name="flat"),
        name=f"euclidean{dim}",
        metric=lambda y: _diag(1.0, dim),
        sample=_box_sampler([-1.0] * dim, [1.0] * dim),
    )


def sphere(radius=1.0, dim=2, pole_guard=None):
    guard = 10.0 * radius if pole_guard is None else float(pole_guard)
    guard2 = guard * guard
    metric = sphere_metric(radius, dim)
    sampler = _box_sampler([-0.7 * radius] * dim, [0.7 * radius] * dim)
    return ManifoldModel(
        dim=dim,
        domain=lambda x: sum(float(c) * float(c) for c in x) < guard2,
        christoffel=levi_civita_from_metric(metric, dim, _sample_points(sampler)),
        name=f"sphere(R={radius:g})",
        metric=metric,
        sample=sampler,
    )


def half_plane(dim=2):
    metric = half_plane_metric(dim)
    sampler = _box_sampler([-1.0] * (dim - 1) + [0.5], [1.0] * (dim - 1) + [2.0])
    return ManifoldModel(
        dim=dim,
        domain=lambda x: x[dim - 1] > 0.0,
        christoffel=levi_civita_from_metric(metric, dim, _sample_points(sampler)),
        name="half_plane",
        metric=metric,
        sample=sampler,
    )


def torsion_demo(beta=1.0):
    beta = float(beta)

    def gamma(y, v, xi):
        return [0.0, beta * (v[0] * xi[1] - v[1] * xi[0])]

    return ManifoldModel(
        dim=2,
        domain=lambda x: True,
        christoffel=ChristoffelMap(gamma, name=f"torsion(beta={beta:g})"),
        name=f"torsion_demo(beta={beta:g})",
        metric=lambda y: _diag(1.0, 2),
        sample=_box_sampler([-1.0, -1.0], [1.0, 1.0]),
    )


def custom_metric(params, dim):
    metric, den = rational_metric(params, dim)
    box = params.get("domain", {})
    lo = np.asarray(box.get("lower", [-np.inf] * dim), float)
    hi = np.asarray(box.get("upper", [np.inf] * dim), float)
    if lo.shape != (dim,) or hi.shape != (dim,) or np.any(lo >= hi):
        raise ModelSpecError("domain bounds must be length-dim with lower < upper")

    def domain(x):
        return bool(np.all(x > lo) and np.all(x < hi)) and den(x) > 0.0

    c_lo = np.where(np.isfinite(lo), lo, -1.0)
    c_hi = np.where(np.isfinite(hi), hi, 1.0)
    mid, half = 0.5 * (c_lo + c_hi), 0.25 * (c_hi - c_lo)
    sampler = _box_sampler(mid - half, mid + half)
    points = params.get("sample_points") or [mid] + _sample_points(sampler)
    for p in points:
        if not domain(np.asarray(p, float)):
            raise ModelSpecError(f"sample point {list(p)} is outside the model domain")
    try:
        check_metric(metric, points)
    except ZeroDivisionError as exc:
        raise MetricError(str(exc)) from exc
    return ManifoldModel(
        dim=dim,
        domain=domain,
        christoffel=levi_civita_from_metric(metric, dim),
        name="custom_metric",
        metric=metric,
        sample=sampler,
    )


def build(spec):
    """Instantiate the model described by a :class:`ModelSpec` (or its dict form)."""
    if isinstance(spec, dict):
        spec = ModelSpec.from_dict(spec)
    if spec.kind == "euclidean":
        return euclidean(spec.dim)
    if spec.kind == "sphere":
        return sphere(spec.radius, spec.dim, spec.pole_guard)
    if spec.kind == "half_plane":
        return half_plane(spec.dim)
    if spec.kind == "torsion_demo":
        return torsion_demo(spec.beta)
    return custom_metric(spec.params, spec.dim)


def default_zoo():
    """The models every invariant suite runs over."""
    return [euclidean(3), sphere(1.0), half_plane(), torsion_demo(0.5)]
