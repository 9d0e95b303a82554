"""Vector fields and scalar functions written over generic scalars."""

from __future__ import annotations

from itertools import product

import numpy as np

from .tangent import powi


def monomial_exponents(dim, degree):
    """All exponent tuples of total degree <= ``degree``, in a fixed order."""
    return [e for e in product(range(degree + 1), repeat=dim) if sum(e) <= degree]


def _monomial(y, exps):
    out = 1.0
    for yi, e in zip(y, exps):
        if e:
            out = out * powi(yi, e)
    return out


class PolynomialField:
    """``y -> coeffs @ [y**e for e in exponents]``, one row per output component."""

    def __init__(self, exponents, coeffs):
        self.exponents = [tuple(int(k) for k in e) for e in exponents]
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 2 or self.coeffs.shape[1] != len(self.exponents):
            raise ValueError("coeffs must have shape (out_dim, len(exponents))")

    def __call__(self, y):
        monos = [_monomial(y, e) for e in self.exponents]
        out = []
        for row in self.coeffs:
            acc = 0.0
            for c, mono in zip(row, monos):
                if c != 0.0:
                    acc = acc + float(c) * mono
            out.append(acc)
        return out

    def __repr__(self):
        return f"PolynomialField(exponents={self.exponents}, coeffs={self.coeffs.tolist()})"


class ScalarPolynomial(PolynomialField):
    def __call__(self, y):
        return super().__call__(y)[0]


def random_polynomial_field(rng, dim, degree=2, scale=1.0):
    exps = monomial_exponents(dim, degree)
    return PolynomialField(exps, scale * rng.standard_normal((dim, len(exps))))


def random_scalar_polynomial(rng, dim, degree=2, scale=1.0):
    exps = monomial_exponents(dim, degree)
    return ScalarPolynomial(exps, scale * rng.standard_normal((1, len(exps))))


def constant_field(u):
    u = [float(c) for c in u]
    return lambda y: list(u)


def scaled_field(h, X):
    """``y -> h(y) X(y)``."""
    return lambda y: [h(y) * c for c in X(y)]
