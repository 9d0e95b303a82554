"""Forward-mode tangent scalars, nestable.

A :class:`Tangent` is a pair ``(value, deriv)``.  Both slots are either plain
floats or tangent scalars one level down, so evaluating a chart map ``f`` over
depth-k scalars computes the k-fold tangent map ``T^k f``.  Plain Python reals
act as constants at any depth.

Model code (Christoffel maps, metrics, vector fields) is written against the
operators and the module-level functions :func:`sin`, :func:`cos`, :func:`exp`,
:func:`log`, :func:`sqrt` and :func:`powi`, which dispatch on the argument type.
"""

from __future__ import annotations

import math
from numbers import Real

import numpy as np

from .errors import DepthMismatch, EvaluationError

MAX_DEPTH = 3

__all__ = [
    "MAX_DEPTH",
    "Tangent",
    "lift_constant",
    "seed",
    "primal",
    "depth_of",
    "sin",
    "cos",
    "exp",
    "log",
    "sqrt",
    "powi",
    "join",
    "split",
    "as_array",
    "primal_array",
]


_REALS = (float, int, np.float64)


def _is_real(x):
    return type(x) in _REALS or isinstance(x, Real)


class Tangent:
    """Scalar carrying a value and a directional derivative."""

    __slots__ = ("value", "deriv", "depth")
    # numpy scalars must defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, value, deriv=0.0, depth=None):
        if depth is not None:
            # internal fast path: slots already have matching depth
            self.value = value
            self.deriv = deriv
            self.depth = depth
            return
        if type(value) is Tangent:
            if type(deriv) is Tangent:
                if deriv.depth != value.depth:
                    raise DepthMismatch(
                        f"value has depth {value.depth}, deriv has depth {deriv.depth}"
                    )
            else:
                deriv = _lift(deriv, value.depth)
            self.depth = value.depth + 1
        elif type(deriv) is Tangent:
            value = _lift(value, deriv.depth)
            self.depth = deriv.depth + 1
        else:
            self.depth = 1
        self.value = value
        self.deriv = deriv

    def __repr__(self):
        return f"Tangent({self.value!r}, {self.deriv!r})"

    def _mismatch(self, other):
        return DepthMismatch(f"cannot combine depth {self.depth} with depth {other.depth}")

    def __add__(self, other):
        if type(other) is Tangent:
            if other.depth != self.depth:
                raise self._mismatch(other)
            return Tangent(self.value + other.value, self.deriv + other.deriv, self.depth)
        if _is_real(other):
            return Tangent(self.value + other, self.deriv, self.depth)
        return NotImplemented

    def __radd__(self, other):
        if _is_real(other):
            return Tangent(other + self.value, self.deriv, self.depth)
        return NotImplemented

    def __sub__(self, other):
        if type(other) is Tangent:
            if other.depth != self.depth:
                raise self._mismatch(other)
            return Tangent(self.value - other.value, self.deriv - other.deriv, self.depth)
        if _is_real(other):
            return Tangent(self.value - other, self.deriv, self.depth)
        return NotImplemented

    def __rsub__(self, other):
        if _is_real(other):
            return Tangent(other - self.value, -self.deriv, self.depth)
        return NotImplemented

    def __neg__(self):
        return Tangent(-self.value, -self.deriv, self.depth)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is Tangent:
            if other.depth != self.depth:
                raise self._mismatch(other)
            return Tangent(
                self.value * other.value,
                self.deriv * other.value + self.value * other.deriv,
                self.depth,
            )
        if _is_real(other):
            return Tangent(self.value * other, self.deriv * other, self.depth)
        return NotImplemented

    def __rmul__(self, other):
        if _is_real(other):
            return Tangent(other * self.value, other * self.deriv, self.depth)
        return NotImplemented

    def __truediv__(self, other):
        if type(other) is Tangent:
            if other.depth != self.depth:
                raise self._mismatch(other)
            if primal(other) == 0.0:
                raise EvaluationError("division by zero", other.depth)
            q = self.value / other.value
            return Tangent(q, (self.deriv - q * other.deriv) / other.value, self.depth)
        if _is_real(other):
            if other == 0:
                raise EvaluationError("division by zero", 0)
            return Tangent(self.value / other, self.deriv / other, self.depth)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_real(other):
            if primal(self) == 0.0:
                raise EvaluationError("division by zero", self.depth)
            q = other / self.value
            return Tangent(q, -(q * self.deriv) / self.value, self.depth)
        return NotImplemented

    def __pow__(self, n):
        if isinstance(n, (int, np.integer)):
            return powi(self, int(n))
        return NotImplemented


def lift_constant(c, depth):
    """Embed the real ``c`` as a depth-``depth`` scalar with all derivative slots zero."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in 0..{MAX_DEPTH}, got {depth}")
    return _lift(float(c), depth)


def _lift(c, depth):
    if depth == 0:
        return c
    return Tangent(_lift(c, depth - 1), _lift(0.0, depth - 1))


def seed(c, d):
    """Tangent vector ``(c; d)`` as an input to a tangent map."""
    return Tangent(c, d)


def primal(x):
    """Bottom real value of a (possibly nested) scalar."""
    while type(x) is Tangent:
        x = x.value
    return x


def depth_of(x):
    return x.depth if type(x) is Tangent else 0


def _is_zero(x):
    return primal(x) == 0.0


def sin(x):
    if type(x) is Tangent:
        return Tangent(sin(x.value), cos(x.value) * x.deriv, x.depth)
    return math.sin(x)


def cos(x):
    if type(x) is Tangent:
        return Tangent(cos(x.value), -sin(x.value) * x.deriv, x.depth)
    return math.cos(x)


def exp(x):
    if type(x) is Tangent:
        e = exp(x.value)
        return Tangent(e, e * x.deriv, x.depth)
    return math.exp(x)


def log(x):
    if type(x) is Tangent:
        if primal(x) <= 0.0:
            raise EvaluationError("log of non-positive value", x.depth)
        return Tangent(log(x.value), x.deriv / x.value, x.depth)
    if x <= 0.0:
        raise EvaluationError("log of non-positive value", 0)
    return math.log(x)


def sqrt(x):
    if type(x) is Tangent:
        if primal(x) <= 0.0:
            raise EvaluationError("sqrt of non-positive value", x.depth)
        r = sqrt(x.value)
        return Tangent(r, x.deriv / (2.0 * r), x.depth)
    if x < 0.0:
        raise EvaluationError("sqrt of negative value", 0)
    return math.sqrt(x)


def powi(x, n):
    """Integer power ``x**n``."""
    n = int(n)
    if type(x) is Tangent:
        if n == 0:
            return _lift(1.0, x.depth)
        if n < 0:
            if _is_zero(x):
                raise EvaluationError("negative power of zero", x.depth)
            return 1.0 / powi(x, -n)
        return Tangent(powi(x.value, n), n * powi(x.value, n - 1) * x.deriv, x.depth)
    if n < 0 and x == 0.0:
        raise EvaluationError("negative power of zero", 0)
    return float(x) ** n


# -- arrays of generic scalars -------------------------------------------------


def as_array(items):
    """Pack scalars into a float64 array, or an object array if any is a Tangent."""
    items = list(items)
    if any(type(e) is Tangent for e in items):
        out = np.empty(len(items), dtype=object)
        out[:] = items
        return out
    return np.array(items, dtype=float)


def primal_array(arr):
    return np.array([primal(e) for e in arr], dtype=float)


def join(values, derivs):
    """Elementwise ``Tangent(values[i], derivs[i])`` as an object array."""
    out = np.empty(len(values), dtype=object)
    out[:] = [Tangent(v, d) for v, d in zip(values, derivs)]
    return out


def split(arr):
    """Inverse of :func:`join`: the value and derivative slots as two arrays.

    Plain reals in ``arr`` are constants and contribute a zero derivative.
    """
    vals, ders = [], []
    for e in arr:
        if type(e) is Tangent:
            vals.append(e.value)
            ders.append(e.deriv)
        else:
            vals.append(e)
            ders.append(0.0)
    return as_array(vals), as_array(ders)
