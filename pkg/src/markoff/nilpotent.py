"""The matrices H, R, S attached to an arrangement.

H(a,b,c) = M(a,b,c)^{-1} M(a,b,c)^t is the canonical congruence automorph
(H^t M H = M).  R is the integral solution of R^t M + M R = 0, unique up to
scale; the normalization here is fixed because downstream denominators
depend on it.  S = H - E.  For Markoff arrangements (defect 0) all three
are rank-2 structured with S^3 = R^3 = 0 and H = exp(-R/2).
"""

from __future__ import annotations

from dataclasses import dataclass

from .arrangements import triangular
from .linalg import IDENTITY, Mat3, Scalar


def defect(a, b, c):
    """a^2 + b^2 + c^2 - abc; zero exactly on solutions of the equation."""
    return a * a + b * b + c * c - a * b * c


def h_matrix(a, b, c) -> Mat3:
    """Closed form of M^{-1} M^t; valid over any commutative ring."""
    return Mat3((
        (1 - (a * a + b * b - a * b * c), a * c * c - b * c - a, a * c - b),
        (a - b * c, 1 - c * c, -c),
        (b, c, 1),
    ))


def h_from_m(a, b, c) -> Mat3:
    """The defining product M^{-1} M^t, as a cross-check route."""
    m = triangular(a, b, c)
    return (m.inv() * m.T).normalized()


def r_matrix(a, b, c) -> Mat3:
    """Integral solution of R^t M + M R = 0 in the fixed normalization."""
    return Mat3((
        (a * a + b * b - a * b * c, 2 * a + b * c - a * c * c, 2 * b - a * c),
        (b * c - 2 * a, c * c - a * a, 2 * c - a * b),
        (a * c - 2 * b, -2 * c - a * b + a * a * c, a * b * c - b * b - c * c),
    ))


def s_matrix(a, b, c) -> Mat3:
    """S = H - E.  For defect 0, S^2 is the outer product
    (c, -b, a)^t (c, ac-b, a)."""
    return h_matrix(a, b, c) - IDENTITY


@dataclass(frozen=True)
class NilpotentKit:
    """H, R, S and the defect for one arrangement, computed together."""

    a: Scalar
    b: Scalar
    c: Scalar
    h: Mat3
    r: Mat3
    s: Mat3
    d: Scalar

    @classmethod
    def of(cls, a, b, c) -> "NilpotentKit":
        return cls(a, b, c, h_matrix(a, b, c), r_matrix(a, b, c),
                   s_matrix(a, b, c), defect(a, b, c))

    @property
    def matrix(self) -> Mat3:
        return triangular(self.a, self.b, self.c)
