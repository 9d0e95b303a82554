"""Chart representations of TM, TTM, TTTM and their structural maps.

Block conventions
-----------------
* ``TangentVector(base, vec)`` is ``(x, xi)`` in TM.
* ``TTVector(x, xi, eta, zeta)`` is ``(x, xi; eta, zeta)`` in TTM, with
  ``pi_TM = (x, xi)`` and ``T(pi_M) = (x, eta)``.  As a nested tangent scalar
  each coordinate is ``Tangent(Tangent(x, xi), Tangent(eta, zeta))``: the inner
  level is the first ``T``, the outer level the second.
* ``TTTVector(a, b, c, d)`` is an element of TT(TM) stored as four 2m-blocks,
  each block a TM coordinate ``(x, xi)``.  In nested form a TM coordinate is
  ``Tangent(Tangent(a, b), Tangent(c, d))``.

Block entries are float arrays, or object arrays of :class:`~jacobiflow.tangent.Tangent`
when the element is itself being differentiated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatch, NotVertical
from .tangent import Tangent, as_array, join, primal_array, split

BASE_TOL = 1e-12
VERTICAL_TOL = 1e-9


def _block(v):
    if isinstance(v, np.ndarray) and v.ndim == 1:
        return v
    return as_array(np.atleast_1d(np.asarray(v, dtype=object)).tolist())


def _primal_norm(*blocks):
    return max((float(np.max(np.abs(primal_array(b)))) if len(b) else 0.0) for b in blocks)


def _same_base(a, b, what):
    pa, pb = primal_array(a), primal_array(b)
    if pa.shape != pb.shape:
        raise BaseMismatch(f"{what}: dimension {pa.shape} vs {pb.shape}")
    scale = 1.0 + max(float(np.max(np.abs(pa))), float(np.max(np.abs(pb))))
    if float(np.max(np.abs(pa - pb))) > BASE_TOL * scale:
        raise BaseMismatch(f"{what}: {pa.tolist()} != {pb.tolist()}")


@dataclass(frozen=True, eq=False)
class TangentVector:
    base: np.ndarray
    vec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", _block(self.base))
        object.__setattr__(self, "vec", _block(self.vec))
        if len(self.base) != len(self.vec):
            raise ValueError("base and vec must have the same length")

    @property
    def dim(self):
        return len(self.base)

    def as_array(self):
        return np.concatenate([self.base, self.vec])

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr)
        m = len(arr) // 2
        return cls(arr[:m], arr[m:])

    def __repr__(self):
        return f"TangentVector(base={self.base.tolist()}, vec={self.vec.tolist()})"


@dataclass(frozen=True, eq=False)
class TTVector:
    x: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        for name in ("x", "xi", "eta", "zeta"):
            object.__setattr__(self, name, _block(getattr(self, name)))
        m = len(self.x)
        if not all(len(b) == m for b in (self.xi, self.eta, self.zeta)):
            raise ValueError("all four blocks must have length m")

    @property
    def dim(self):
        return len(self.x)

    def blocks(self):
        return self.x, self.xi, self.eta, self.zeta

    def as_array(self):
        return np.concatenate(self.blocks())

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr)
        m = len(arr) // 4
        return cls(arr[:m], arr[m : 2 * m], arr[2 * m : 3 * m], arr[3 * m :])

    def pi_TM(self):
        """Foot point in TM for the bundle ``pi_TM``."""
        return TangentVector(self.x, self.xi)

    def T_pi_M(self):
        """Image under ``T(pi_M)``."""
        return TangentVector(self.x, self.eta)

    def nested(self):
        """Coordinates as nested depth-2 scalars (the input form for ``TTf``)."""
        return join(join(self.x, self.xi), join(self.eta, self.zeta))

    @classmethod
    def from_nested(cls, arr):
        inner, outer = split(arr)
        x, xi = split(inner)
        eta, zeta = split(outer)
        return cls(x, xi, eta, zeta)

    def __repr__(self):
        return "TTVector(" + "; ".join(str(b.tolist()) for b in self.blocks()) + ")"


@dataclass(frozen=True, eq=False)
class TTTVector:
    """Element of TT(TM): four blocks of length 2m."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _block(getattr(self, name)))
        n = len(self.a)
        if n % 2 or not all(len(v) == n for v in (self.b, self.c, self.d)):
            raise ValueError("blocks must share an even length 2m")

    @property
    def dim(self):
        return len(self.a) // 2

    def blocks(self):
        return self.a, self.b, self.c, self.d

    def as_array(self):
        return np.concatenate(self.blocks())

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr)
        n = len(arr) // 4
        return cls(arr[:n], arr[n : 2 * n], arr[2 * n : 3 * n], arr[3 * n :])

    @classmethod
    def from_nested(cls, arr):
        """From 2m depth-2 scalars, one per TM coordinate."""
        inner, outer = split(arr)
        a, b = split(inner)
        c, d = split(outer)
        return cls(a, b, c, d)

    @classmethod
    def from_tangent(cls, t):
        """Reinterpret a TTVector of depth-1 scalars (an element of T(TTM)) in TT(TM) blocks."""
        x, dx = split(t.x)
        xi, dxi = split(t.xi)
        eta, deta = split(t.eta)
        zeta, dzeta = split(t.zeta)
        return cls(
            np.concatenate([x, xi]),
            np.concatenate([eta, zeta]),
            np.concatenate([dx, dxi]),
            np.concatenate([deta, dzeta]),
        )

    def base_tt(self):
        """Foot point ``(a; b)`` in TTM."""
        m = self.dim
        return TTVector(self.a[:m], self.a[m:], self.b[:m], self.b[m:])

    def fiber_tt(self):
        """Tangent part ``(c; d)`` laid out as a TTVector."""
        m = self.dim
        return TTVector(self.c[:m], self.c[m:], self.d[:m], self.d[m:])

    def __repr__(self):
        return "TTTVector(" + "; ".join(str(b.tolist()) for b in self.blocks()) + ")"


# -- flips ---------------------------------------------------------------------


def flip(t):
    """Canonical flip of TTM: ``(x, xi; eta, zeta) -> (x, eta; xi, zeta)``."""
    return TTVector(t.x, t.eta, t.xi, t.zeta)


def flip_level2(t):
    """Canonical flip of TT(TM): swaps the second and third 2m-blocks."""
    return TTTVector(t.a, t.c, t.b, t.d)


# -- vertical lifts ------------------------------------------------------------


def vertical_lift(v):
    """Small vertical lift ``(y, v) -> (y, 0; 0, v)``."""
    zero = np.zeros(v.dim)
    return TTVector(v.base, zero, zero, v.vec)


def vertical_lift_big(u, v):
    """Big vertical lift ``(u_y, v_y) -> d/dt|0 (u + t v) = (y, u; 0, v)``."""
    _same_base(u.base, v.base, "vertical_lift_big")
    return TTVector(u.base, u.vec, np.zeros(u.dim), v.vec)


def vertical_projection(t, tol=VERTICAL_TOL):
    """``pr_2 o Vl^{-1}``: ``(y, u; 0, w) -> (y, w)``.

    An element is vertical when its ``T(pi_M)`` component vanishes, i.e. the
    ``eta`` block is zero up to ``tol * (1 + |t|)``.
    """
    size = _primal_norm(*t.blocks())
    defect = _primal_norm(t.eta)
    if defect > tol * (1.0 + size):
        raise NotVertical(f"eta block has size {defect:.3e} > {tol:g}*(1+{size:.3e})")
    return TangentVector(t.x, t.zeta)


def vertical_lift_tt(t):
    """Vertical lift of the bundle ``(TTM, pi_TM, TM)``: TTM -> TT(TM).

    The point ``((x, xi); 0)`` with tangent ``(0; (eta, zeta))``.
    """
    zero = np.zeros(2 * t.dim)
    return TTTVector(np.concatenate([t.x, t.xi]), zero, zero, np.concatenate([t.eta, t.zeta]))


# -- the two vector bundle structures -------------------------------------------


def add_over_E(t1, t2):
    """Fiber addition of ``(TTM, pi_TM, TM)``: equal ``(x, xi)``, adds ``(eta, zeta)``."""
    _same_base(np.concatenate([t1.x, t1.xi]), np.concatenate([t2.x, t2.xi]), "add_over_E")
    return TTVector(t1.x, t1.xi, t1.eta + t2.eta, t1.zeta + t2.zeta)


def add_over_TM(t1, t2):
    """Fiber addition ``T(+)`` of ``(TTM, T pi_M, TM)``: equal ``(x, eta)``, adds ``(xi, zeta)``."""
    _same_base(np.concatenate([t1.x, t1.eta]), np.concatenate([t2.x, t2.eta]), "add_over_TM")
    return TTVector(t1.x, t1.xi + t2.xi, t1.eta, t1.zeta + t2.zeta)


def scale_over_E(c, t):
    return TTVector(t.x, t.xi, c * t.eta, c * t.zeta)


def scale_over_TM(c, t):
    return TTVector(t.x, c * t.xi, t.eta, c * t.zeta)


def sub_over_E(t1, t2):
    return add_over_E(t1, scale_over_E(-1.0, t2))


def sub_over_TM(t1, t2):
    return add_over_TM(t1, scale_over_TM(-1.0, t2))


# -- tangent maps of chart maps -------------------------------------------------


def tangent_map(f, v):
    """``Tf`` at ``v`` for a chart map ``f`` written over generic scalars."""
    out = as_array(f(join(v.base, v.vec)))
    return TangentVector(*split(out))


def double_tangent_map(f, t):
    """``TTf`` at ``t``, by depth-2 nested evaluation."""
    return TTVector.from_nested(as_array(f(t.nested())))


def section_tangent(s, v):
    """``T s~`` at ``v`` for the section ``s~(y) = (y, s(y))`` of TM: the TTVector ``(y, s; xi, Ds xi)``."""
    y = join(v.base, v.vec)
    sy = as_array(s(y))
    s0, ds = split(sy)
    return TTVector(v.base, s0, v.vec, ds)


def section_double_tangent(s, t):
    """``TT s~`` at ``t`` for the section ``s~(y) = (y, s(y))``, as an element of TT(TM)."""
    y = t.nested()
    sy = as_array(s(y))
    return TTTVector.from_nested(np.concatenate([y, sy]))


def is_tangent_valued(arr):
    return arr.dtype == object and any(type(e) is Tangent for e in arr)
