import random
from fractions import Fraction

import pytest

from markoff.linalg import Mat3


@pytest.fixture
def rng():
    return random.Random(20240917)


def random_int_matrix(rng, lo=-9, hi=9, nonsingular=False) -> Mat3:
    while True:
        m = Mat3(tuple(tuple(rng.randint(lo, hi) for _ in range(3)) for _ in range(3)))
        if not nonsingular or m.det() != 0:
            return m


def random_fraction(rng, num=60, den=24) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


# --- polynomial oracle for characteristic polynomials ------------------------
# coefficient lists, lowest degree first


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_add(p, q):
    n = max(len(p), len(q))
    p = list(p) + [0] * (n - len(p))
    q = list(q) + [0] * (n - len(q))
    return [a + b for a, b in zip(p, q)]


def poly_scale(p, k):
    return [k * a for a in p]


def char_poly_bruteforce(m: Mat3):
    """Expand det(M - x E) by cofactors with polynomial entries; returns
    (c3, c2, c1, c0) to match char_poly3."""
    entries = [[[m[i, j]] if i != j else [m[i, j], -1] for j in range(3)]
               for i in range(3)]

    def minor(rows, cols):
        (r0, r1), (c0, c1) = rows, cols
        return poly_add(
            poly_mul(entries[r0][c0], entries[r1][c1]),
            poly_scale(poly_mul(entries[r0][c1], entries[r1][c0]), -1),
        )

    det = [0]
    for j, sign in ((0, 1), (1, -1), (2, 1)):
        cols = tuple(c for c in range(3) if c != j)
        det = poly_add(det, poly_scale(
            poly_mul(entries[0][j], minor((1, 2), cols)), sign))
    det = det + [0] * (4 - len(det))
    return (det[3], det[2], det[1], det[0])
