"""Split quaternions a + b i + c j + d k with i² = j² = 1, k = ij = -ji.

The algebra is isomorphic to real 2x2 matrices; the indefinite norm
``q q̄`` becomes the determinant under that isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .rational import asmatrix, rational_from_json, rational_to_json, to_rational


@dataclass(frozen=True)
class ParaQuaternion:
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, to_rational(getattr(self, name)))

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: "ParaQuaternion") -> "ParaQuaternion":
        return ParaQuaternion(*(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "ParaQuaternion") -> "ParaQuaternion":
        return ParaQuaternion(*(x - y for x, y in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "ParaQuaternion":
        return ParaQuaternion(*(-x for x in self.coefficients))

    def __mul__(self, other):
        if isinstance(other, ParaQuaternion):
            return mul(self, other)
        s = to_rational(other)
        return ParaQuaternion(*(s * x for x in self.coefficients))

    def __rmul__(self, other):
        s = to_rational(other)
        return ParaQuaternion(*(s * x for x in self.coefficients))

    def conj(self) -> "ParaQuaternion":
        return conj(self)

    def norm_sq(self) -> Fraction:
        return norm_sq(self)

    @property
    def real(self) -> Fraction:
        return self.a

    def is_imaginary(self) -> bool:
        return self.a == 0

    def to_json(self) -> dict:
        return {k: rational_to_json(v) for k, v in zip("abcd", self.coefficients)}

    @classmethod
    def from_json(cls, obj: dict) -> "ParaQuaternion":
        return cls(*(rational_from_json(obj.get(k, 0)) for k in "abcd"))


ONE = ParaQuaternion(1, 0, 0, 0)
I = ParaQuaternion(0, 1, 0, 0)
J = ParaQuaternion(0, 0, 1, 0)
K = ParaQuaternion(0, 0, 0, 1)
BASIS = (ONE, I, J, K)


def mul(p: ParaQuaternion, q: ParaQuaternion) -> ParaQuaternion:
    a1, b1, c1, d1 = p.coefficients
    a2, b2, c2, d2 = q.coefficients
    # i² = j² = 1, k² = -1, ij = -ji = k, jk = -kj = -i, ki = -ik = -j
    return ParaQuaternion(
        a1 * a2 + b1 * b2 + c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2,
        a1 * c2 + c1 * a2 + b1 * d2 - d1 * b2,
        a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
    )


def conj(q: ParaQuaternion) -> ParaQuaternion:
    return ParaQuaternion(q.a, -q.b, -q.c, -q.d)


def norm_sq(q: ParaQuaternion) -> Fraction:
    """``q q̄``; equals a² - b² - c² + d²."""
    return q.a * q.a - q.b * q.b - q.c * q.c + q.d * q.d


def inner(p: ParaQuaternion, q: ParaQuaternion) -> Fraction:
    """Polar form of the norm, Re(p q̄)."""
    return mul(p, conj(q)).a


def to_matrix(q: ParaQuaternion) -> np.ndarray:
    return asmatrix([[q.a + q.b, q.c + q.d], [q.c - q.d, q.a - q.b]])


def from_matrix(m) -> ParaQuaternion:
    m = asmatrix(m)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {m.shape}")
    half = Fraction(1, 2)
    return ParaQuaternion(
        half * (m[0, 0] + m[1, 1]),
        half * (m[0, 0] - m[1, 1]),
        half * (m[0, 1] + m[1, 0]),
        half * (m[0, 1] - m[1, 0]),
    )


def unit_conjugation(u: ParaQuaternion, p: ParaQuaternion) -> ParaQuaternion:
    """Automorphism p -> u p u⁻¹ = u p ū for a unit split quaternion ``u``."""
    if norm_sq(u) != 1:
        raise ValueError(f"unit_conjugation needs norm_sq(u) == 1, got {norm_sq(u)}")
    return mul(mul(u, p), conj(u))
