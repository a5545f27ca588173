"""Two-variable Laurent polynomials and their Newton polygons."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, NamedTuple

import numpy as np

from .errors import ZeroPolynomial


class LaurentPoly2:
    """Sparse Laurent polynomial in ``z, w``: a map ``(m, n) -> coefficient``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping = None):
        clean = {}
        for (m, n), c in (terms or {}).items():
            if isinstance(c, int) and not isinstance(c, bool):
                c = Fraction(c)
            if c != 0:
                clean[(int(m), int(n))] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def constant(cls, c) -> "LaurentPoly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, m: int, n: int) -> "LaurentPoly2":
        return cls({(m, n): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, LaurentPoly2):
            return self.terms == other.terms
        if isinstance(other, (int, float, Fraction)):
            return self == LaurentPoly2.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly2(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly2({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                k = (m1 + m2, n1 + n2)
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly2(out)

    __rmul__ = __mul__

    def __call__(self, z, w):
        """Evaluate at nonzero ``z, w`` (scalars or numpy arrays)."""
        total = 0
        for (m, n), c in self.terms.items():
            total = total + _as_number(c) * z ** m * w ** n
        return total

    def evaluate_exact(self, z, w):
        """Exact evaluation at rational points such as (+-1, +-1)."""
        total = Fraction(0)
        for (m, n), c in self.terms.items():
            total += c * Fraction(z) ** m * Fraction(w) ** n
        return total

    @property
    def support(self) -> list[tuple[int, int]]:
        return list(self.terms)

    def scaled(self, c) -> "LaurentPoly2":
        return self * c

    def shifted(self, a: int, b: int) -> "LaurentPoly2":
        """Multiply by z^a w^b."""
        return LaurentPoly2({(m + a, n + b): c for (m, n), c in self.terms.items()})

    def canonical(self) -> "LaurentPoly2":
        """Normalize by +-z^a w^b: lexicographically smallest exponent moves to (0, 0) with positive coefficient."""
        if not self.terms:
            return self
        (m0, n0), c0 = next(iter(self.terms.items()))
        out = self.shifted(-m0, -n0)
        return -out if c0 < 0 else out

    def w_coefficients(self, z) -> tuple[int, list]:
        """For fixed ``z``: (lowest w-exponent, coefficients of w^k from that exponent upward)."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial")
        ns = [n for _, n in self.terms]
        lo, hi = min(ns), max(ns)
        coeffs = [0j] * (hi - lo + 1)
        for (m, n), c in self.terms.items():
            coeffs[n - lo] += _as_number(c) * z ** m
        return lo, coeffs

    def triples(self) -> list[tuple[object, int, int]]:
        return [(c, m, n) for (m, n), c in self.terms.items()]

    def max_abs_coefficient(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly2(0)"
        return "LaurentPoly2(" + " + ".join(f"{c}*z^{m}*w^{n}" for (m, n), c in self.terms.items()) + ")"


def _as_number(c):
    return float(c) if isinstance(c, Fraction) else c


def _coerce(x) -> LaurentPoly2:
    if isinstance(x, LaurentPoly2):
        return x
    return LaurentPoly2.constant(x)


Z = LaurentPoly2.monomial(1, 1, 0)
W = LaurentPoly2.monomial(1, 0, 1)


class NewtonPolygon(NamedTuple):
    vertices: list  # counterclockwise hull vertices
    area: Fraction
    interior_points: int
    nondegenerate: bool


def convex_hull(points) -> list[tuple[int, int]]:
    """Andrew's monotone chain; counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def newton_polygon(poly: LaurentPoly2) -> NewtonPolygon:
    if poly.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")
    hull = convex_hull(poly.support)
    if len(hull) < 3:
        return NewtonPolygon(hull, Fraction(0), 0, False)
    twice = 0
    boundary = 0
    for i, (x0, y0) in enumerate(hull):
        x1, y1 = hull[(i + 1) % len(hull)]
        twice += x0 * y1 - x1 * y0
        boundary += math.gcd(x1 - x0, y1 - y0)
    area = Fraction(twice, 2)
    # Pick: A = I + B/2 - 1
    interior = int(area - Fraction(boundary, 2) + 1)
    return NewtonPolygon(hull, area, interior, area > 0)


def evaluate_grid(poly: LaurentPoly2, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized evaluation on broadcastable arrays of nonzero complex numbers."""
    out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
    for (m, n), c in poly.terms.items():
        out += _as_number(c) * z ** m * w ** n
    return out
