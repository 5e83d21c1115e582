"""Exact scalar and small-matrix arithmetic.

Scalars are Python ints and fractions.Fraction; nothing here ever touches a
float.  Fraction keeps every value in lowest terms with a positive
denominator, so equality of results is decidable entrywise.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = int | Fraction


def _norm(x) -> Scalar:
    """Collapse integral Fractions back to int so integer matrices stay integer."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


class Mat3:
    """Immutable 3x3 matrix over exact scalars."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        r = tuple(tuple(row) for row in rows)
        if len(r) != 3 or any(len(row) != 3 for row in r):
            raise ValueError("Mat3 needs 3 rows of 3 entries")
        object.__setattr__(self, "rows", r)

    def __setattr__(self, name, value):
        raise AttributeError("Mat3 is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Mat3):
            return NotImplemented
        return all(
            self.rows[i][j] == other.rows[i][j] for i in range(3) for j in range(3)
        )

    def __hash__(self):
        return hash(tuple(tuple(Fraction(x) for x in row) for row in self.rows))

    def __repr__(self):
        return "Mat3(%s)" % (list(list(row) for row in self.rows),)

    def __add__(self, other):
        return Mat3(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __sub__(self, other):
        return Mat3(
            tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )

    def __neg__(self):
        return Mat3(tuple(-a for a in row) for row in self.rows)

    def __mul__(self, other):
        if isinstance(other, Mat3):
            a, b = self.rows, other.rows
            return Mat3(
                tuple(
                    a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]
                    for j in range(3)
                )
                for i in range(3)
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, k) -> "Mat3":
        return Mat3(tuple(_norm(k * a) for a in row) for row in self.rows)

    @property
    def T(self) -> "Mat3":
        r = self.rows
        return Mat3(((r[0][0], r[1][0], r[2][0]),
                     (r[0][1], r[1][1], r[2][1]),
                     (r[0][2], r[1][2], r[2][2])))

    def trace(self):
        r = self.rows
        return r[0][0] + r[1][1] + r[2][2]

    def det(self):
        r = self.rows
        return (
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        )

    def adjugate(self) -> "Mat3":
        r = self.rows

        def cof(i, j):
            rows = [k for k in range(3) if k != i]
            cols = [k for k in range(3) if k != j]
            minor = (
                r[rows[0]][cols[0]] * r[rows[1]][cols[1]]
                - r[rows[0]][cols[1]] * r[rows[1]][cols[0]]
            )
            return -minor if (i + j) % 2 else minor

        # adj = transpose of the cofactor matrix
        return Mat3(tuple(cof(j, i) for j in range(3)) for i in range(3))

    def inv(self) -> "Mat3":
        return inverse3(self)

    def is_integral(self) -> bool:
        return all(
            isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1)
            for row in self.rows
            for a in row
        )

    def normalized(self) -> "Mat3":
        """Entrywise _norm, collapsing whole Fractions to ints."""
        return Mat3(tuple(_norm(a) for a in row) for row in self.rows)

    def mod(self, q: int) -> "Mat3":
        """Entrywise reduction mod q; requires an integral matrix."""
        if not self.is_integral():
            raise ValueError("mod requires an integral matrix")
        return Mat3(tuple(int(a) % q for a in row) for row in self.rows)


IDENTITY = Mat3(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
ZERO = Mat3(((0, 0, 0), (0, 0, 0), (0, 0, 0)))
# subdiagonal shift: e1 -> e2 -> e3 -> 0 on column replay
SHIFT = Mat3(((0, 0, 0), (1, 0, 0), (0, 1, 0)))


def diag(a, b, c) -> Mat3:
    return Mat3(((a, 0, 0), (0, b, 0), (0, 0, c)))


def outer(u, v) -> Mat3:
    """Column u times row v."""
    return Mat3(tuple(ui * vj for vj in v) for ui in u)


def matvec(m: Mat3, v):
    r = m.rows
    return tuple(r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2] for i in range(3))


def vecmat(v, m: Mat3):
    r = m.rows
    return tuple(v[0] * r[0][j] + v[1] * r[1][j] + v[2] * r[2][j] for j in range(3))


def inverse3(m: Mat3) -> Mat3:
    """Exact inverse via adjugate over determinant.

    Raises
    ------
    SingularMatrixError
        when det(m) = 0.
    """
    from .errors import SingularMatrixError

    d = m.det()
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    adj = m.adjugate()
    return Mat3(tuple(_norm(Fraction(a) / d) for a in row) for row in adj.rows)


def char_poly3(m: Mat3):
    """Coefficients (c3, c2, c1, c0) of det(m - x*E), with c3 = -1.

    det(m - x E) = -x^3 + tr(m) x^2 - (sum of principal 2x2 minors) x + det(m).
    """
    r = m.rows
    minors = (
        r[0][0] * r[1][1] - r[0][1] * r[1][0]
        + r[0][0] * r[2][2] - r[0][2] * r[2][0]
        + r[1][1] * r[2][2] - r[1][2] * r[2][1]
    )
    return (-1, m.trace(), -minors, m.det())


def exp_half_r(r: Mat3, s) -> Mat3:
    """Exact value of exp(-(s/2) * r) for a nilpotent r with r^3 = 0.

    The cube-zero condition truncates the series at the quadratic term:
    E - (s/2) r + (s^2/8) r^2.

    Raises
    ------
    NotNilpotentError
        when r^3 != 0.
    """
    from .errors import NotNilpotentError

    r2 = r * r
    if r2 * r != ZERO:
        raise NotNilpotentError("r^3 != 0")
    s = Fraction(s)
    out = IDENTITY - r.scale(s / 2) + r2.scale(s * s / 8)
    return out.normalized()


class Mat2:
    """Immutable 2x2 integer matrix; used for the unimodular word calculus."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        r = tuple(tuple(int(x) for x in row) for row in rows)
        if len(r) != 2 or any(len(row) != 2 for row in r):
            raise ValueError("Mat2 needs 2 rows of 2 entries")
        object.__setattr__(self, "rows", r)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Mat2(%s)" % (list(list(row) for row in self.rows),)

    def __mul__(self, other):
        a, b = self.rows, other.rows
        return Mat2((
            (a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]),
        ))

    def trace(self) -> int:
        return self.rows[0][0] + self.rows[1][1]

    def det(self) -> int:
        return self.rows[0][0] * self.rows[1][1] - self.rows[0][1] * self.rows[1][0]
