"""Ordered arrangements of Markoff solutions and their triangular matrices.

An arrangement (a, b, c) is packaged as the unit upper-triangular matrix

    M(a, b, c) = [[1, a, b],
                  [0, 1, c],
                  [0, 0, 1]].

Tree arrangements additionally place the largest component first or last
(max{a,b,c} in {a,c}); each tree vertex carries four of them (one for the
root, two for (3,3,6)).  Two shear generators

    P(x) = [[0,-1,0],[1,x,0],[0,0,1]],   Q(y) = [[1,0,0],[0,y,1],[0,-1,0]]

connect an arrangement to its children by congruence:

    P(a)^t M(a,b,c) P(a) = M(a, c, ac-b)
    Q(c)^t M(a,b,c) Q(c) = M(ac-b, a, c)

and the reversed forms M(c,b,a) branch with Q(a) and P(c).  Composing the
factors along root paths yields, for any two tree arrangements, an integral
determinant-1 matrix N with N^t M_src N = M_dst that also maps the column
(c, ac-b, a) of the source to that of the destination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InconsistentDecompositionError,
    InvalidTripleError,
    NotUnimodularError,
)
from .linalg import IDENTITY, Mat2, Mat3, Scalar, inverse3, matvec
from .tree import MarkoffTriple

P_RULE = "P"
Q_RULE = "Q"


def triangular(a, b, c) -> Mat3:
    """M(a, b, c) for arbitrary entries."""
    return Mat3(((1, a, b), (0, 1, c), (0, 0, 1)))


@dataclass(frozen=True)
class Arrangement:
    """An ordered solution (a, b, c) of a^2 + b^2 + c^2 = abc.

    Entries may be any exact scalars (the matrix identities live over any
    commutative ring); tree navigation additionally requires positive
    integers with the dominant in position a or c.
    """

    a: Scalar
    b: Scalar
    c: Scalar

    def __post_init__(self):
        a, b, c = self.a, self.b, self.c
        if a * a + b * b + c * c != a * b * c:
            raise InvalidTripleError(f"arrangement {(a, b, c)} does not solve the equation")

    @property
    def matrix(self) -> Mat3:
        return triangular(self.a, self.b, self.c)

    @property
    def reversed(self) -> "Arrangement":
        return Arrangement(self.c, self.b, self.a)

    @property
    def m(self) -> Scalar:
        """a*c - b, the dominant of the child the arrangement branches to."""
        return self.a * self.c - self.b

    @property
    def column(self):
        """The distinguished column (c, ac - b, a)."""
        return (self.c, self.m, self.a)

    def is_integral(self) -> bool:
        return all(
            isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
            for v in (self.a, self.b, self.c)
        )

    def is_tree_arrangement(self) -> bool:
        """Positive integral with max{a, b, c} in {a, c}."""
        if not self.is_integral():
            return False
        a, b, c = int(self.a), int(self.b), int(self.c)
        return a > 0 and b > 0 and c > 0 and max(a, b, c) in (a, c)

    @property
    def triple(self) -> MarkoffTriple:
        return MarkoffTriple.of(int(self.a), int(self.b), int(self.c))

    def as_tuple(self):
        return (self.a, self.b, self.c)


def mt_arrangements(t: MarkoffTriple) -> list[Arrangement]:
    """All distinct tree arrangements of a triple, lexicographic order.

    Four in general; (3,3,3) has one and (3,3,6) has two.
    """
    seen = set()
    out = []
    x, y, z = t.as_tuple()
    perms = {(x, y, z), (y, x, z), (z, x, y), (z, y, x),
             (x, z, y), (y, z, x)}
    for p in sorted(perms):
        if max(p) in (p[0], p[2]) and p not in seen:
            seen.add(p)
            out.append(Arrangement(*p))
    return out


def generator_p(x) -> Mat3:
    return Mat3(((0, -1, 0), (1, x, 0), (0, 0, 1)))


def generator_q(y) -> Mat3:
    return Mat3(((1, 0, 0), (0, y, 1), (0, -1, 0)))


def _require_tree(arr: Arrangement):
    if not arr.is_tree_arrangement():
        raise InvalidTripleError(f"{arr.as_tuple()} is not a tree arrangement")


def branch_step(arr: Arrangement, rule: str) -> tuple[Arrangement, Mat3]:
    """One step away from the root.

    P_RULE: (a,b,c) -> (a, c, ac-b) with factor P(a);
    Q_RULE: (a,b,c) -> (ac-b, a, c) with factor Q(c).
    """
    _require_tree(arr)
    a, b, c = arr.as_tuple()
    if rule == P_RULE:
        return Arrangement(a, c, a * c - b), generator_p(a)
    if rule == Q_RULE:
        return Arrangement(a * c - b, a, c), generator_q(c)
    raise ValueError(f"rule must be {P_RULE!r} or {Q_RULE!r}")


def parent_step(arr: Arrangement) -> tuple[Arrangement, Mat3, str]:
    """Invert one branch step: the unique (parent arrangement, factor, rule).

    An arrangement with c dominant is the P-image of (a, ab-c, b); with a
    dominant it is the Q-image of (b, bc-a, c).  Only the root has a = c.
    """
    _require_tree(arr)
    a, b, c = int(arr.a), int(arr.b), int(arr.c)
    if a == c:
        raise InvalidTripleError("root arrangement has no parent step")
    if c > a:
        return Arrangement(a, a * b - c, b), generator_p(a), P_RULE
    return Arrangement(b, b * c - a, c), generator_q(c), Q_RULE


def root_path_factors(arr: Arrangement) -> list[Mat3]:
    """Generator factors g1..gk with root --g1--> ... --gk--> arr."""
    _require_tree(arr)
    factors: list[Mat3] = []
    cur = arr
    while not (cur.a == cur.c == 3):
        cur, factor, _rule = parent_step(cur)
        factors.append(factor)
    factors.reverse()
    return factors


def root_isomorph(arr: Arrangement) -> Mat3:
    """N with N^t M(3,3,3) N = M(arr) and N^t (3,6,3)^t = (c, ac-b, a)^t."""
    n = IDENTITY
    for factor in root_path_factors(arr):
        n = n * factor
    return n


def tree_isomorph(src: Arrangement, dst: Arrangement) -> Mat3:
    """Integral determinant-1 N with N^t M(src) N = M(dst), built by
    composing branch factors through the root.

    The same N transports the distinguished columns:
    N^t (c_s, a_s c_s - b_s, a_s)^t = (c_d, a_d c_d - b_d, a_d)^t.
    """
    n_src = root_isomorph(src)
    n_dst = root_isomorph(dst)
    return (inverse3(n_src) * n_dst).normalized()


def signed_reflect(n: Mat3) -> Mat3:
    """diag(1,-1,1) (N^{-1})^t diag(1,-1,1); an involution on SL(3, Z).

    When N^t M(3,3,3) N = M(a,b,c) with N^t (3,6,3)^t = (c, ac-b, a)^t, the
    reflected matrix G satisfies G^t M(3,6,3) G = M(a, ac-b, c) and
    G (c, b-ac, a)^t = (3,-6,3)^t.
    """
    if not n.is_integral():
        raise NotUnimodularError("signed_reflect needs an integral matrix")
    d = n.det()
    if d not in (1, -1):
        raise NotUnimodularError(f"det = {d}, expected +-1")
    j = Mat3(((1, 0, 0), (0, -1, 0), (0, 0, 1)))
    return (j * inverse3(n).T * j).normalized()


# --- 2x2 word calculus -----------------------------------------------------
#
# Base pair A0 = [[2,1],[1,1]], B0 = [[1,1],[1,2]].  A triple (A, AB, B)
# branches to (A, A^2 B, AB) and (AB, A B^2, B); traces then realize the
# normalized Markoff solutions, with the lower-left entry of each component
# equal to a third of its trace.

A0 = Mat2(((2, 1), (1, 1)))
B0 = Mat2(((1, 1), (1, 2)))


@dataclass(frozen=True)
class AdmissibleTriple:
    first: Mat2   # A
    middle: Mat2  # A*B
    last: Mat2    # B

    def __post_init__(self):
        if self.first * self.last != self.middle:
            raise InvalidTripleError("middle component must equal first*last")

    def traces(self) -> tuple[int, int, int]:
        return (self.first.trace(), self.middle.trace(), self.last.trace())

    def components(self) -> tuple[Mat2, Mat2, Mat2]:
        return (self.first, self.middle, self.last)


def admissible_root() -> AdmissibleTriple:
    return AdmissibleTriple(A0, A0 * B0, B0)


def admissible_step(t: AdmissibleTriple, step: str) -> AdmissibleTriple:
    """LEFT: (A, A^2B, AB); RIGHT: (AB, AB^2, B)."""
    a, ab, b = t.first, t.middle, t.last
    if step == "L":
        return AdmissibleTriple(a, a * ab, ab)
    if step == "R":
        return AdmissibleTriple(ab, ab * b, b)
    raise ValueError(f"step must be 'L' or 'R', got {step!r}")


def admissible_at(path: str) -> AdmissibleTriple:
    t = admissible_root()
    for step in path:
        t = admissible_step(t, step)
    return t


def _coefficients(x: Mat2) -> tuple[int, int, int]:
    """Integer (u, v, w) with x = u*A0 + v*A0B0 + w*B0.

    Four entry equations over three unknowns; the base spans, so a unique
    rational solution exists and must come out integral.
    """
    ab = A0 * B0
    # solve with entries (0,0), (0,1), (1,0); check (1,1)
    rows = []
    rhs = []
    for (i, j) in ((0, 0), (0, 1), (1, 0)):
        rows.append((A0[i, j], ab[i, j], B0[i, j]))
        rhs.append(x[i, j])
    m = Mat3(rows)
    sol = matvec(inverse3(m), rhs)
    u, v, w = sol
    check = u * A0[1, 1] + v * ab[1, 1] + w * B0[1, 1]
    if check != x[1, 1]:
        raise InconsistentDecompositionError(f"{x!r} is not in the span of the base triple")
    out = []
    for value in (u, v, w):
        f = Fraction(value)
        if f.denominator != 1:
            raise InconsistentDecompositionError(f"non-integral coefficient {f}")
        out.append(int(f))
    return tuple(out)


def coefficient_columns(t: AdmissibleTriple) -> Mat3:
    """Coefficient vectors of the three components, assembled as columns."""
    cols = [_coefficients(x) for x in t.components()]
    return Mat3(tuple(cols[j][i] for j in range(3)) for i in range(3))
