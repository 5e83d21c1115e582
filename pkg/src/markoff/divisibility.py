"""Number-theoretic layer: the cross-term identity, the prime-splitting
audits, and the coprime factorization frak_m = f * g.

For a common-m pair write X = a1 c2 - c1 a2 and Y = a1 a2 - c1 c2.  The
cross-term identity X * Y = m^2 (b1 - b2) drives everything: each prime
power q^l dividing frak_m (q not 2 or 3) must contribute q^{2l} to exactly
one of X, Y, which yields a unique coprime split frak_m = f g with
f^2 | X and g^2 | Y.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import LemmaViolationError
from .isomorph import PairContext

_TRIAL_LIMIT = 1_000_000


def cross_term_identity(ctx: PairContext):
    """Both sides of (a1 c2 - c1 a2)(a1 a2 - c1 c2) = m^2 (b1 - b2)."""
    a1, b1, c1 = ctx.arr1.as_tuple()
    a2, b2, c2 = ctx.arr2.as_tuple()
    m = ctx.m
    lhs = (a1 * c2 - c1 * a2) * (a1 * a2 - c1 * c2)
    rhs = m * m * (b1 - b2)
    return lhs, rhs


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_factor(n: int, rng: random.Random) -> int:
    """Brent's cycle variant of the rho method; n composite and odd."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Complete prime factorization of n >= 1.

    Trial division up to 10^6, then rho splitting with a deterministic
    primality check on every cofactor.
    """
    n = int(n)
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        rng = random.Random(0xD1D)
        stack = [n]
        while stack:
            v = stack.pop()
            if v == 1:
                continue
            if is_prime(v):
                out[v] = out.get(v, 0) + 1
                continue
            d = _rho_factor(v, rng)
            stack.extend((d, v // d))
    return out


@dataclass(frozen=True)
class FGFactorization:
    """The unique coprime split frak_m = f * g with f^2 | X and g^2 | Y.

    Primes 2 and 3 are excluded from the assignment; on tree data frak_m
    never contains them, so f * g = frak_m there, and any 2,3-part of m is
    reported separately in residual_23.
    """

    f: int
    g: int
    m: int
    frak_m: int
    x: int  # a1 c2 - c1 a2
    y: int  # a1 a2 - c1 c2
    residual_23: int  # the full 2,3-part of m, m = f * g * residual_23

    def __post_init__(self):
        assert self.f * self.g * self.residual_23 == self.m


def _int_cross_terms(ctx: PairContext) -> tuple[int, int]:
    vals = []
    a1, _, c1 = ctx.arr1.as_tuple()
    a2, _, c2 = ctx.arr2.as_tuple()
    for v in (a1 * c2 - c1 * a2, a1 * a2 - c1 * c2):
        f = Fraction(v)
        if f.denominator != 1:
            raise ValueError("divisibility audits need integral arrangements")
        vals.append(int(f))
    return vals[0], vals[1]


def fg_factorization(ctx: PairContext) -> FGFactorization:
    """Assign each prime power q^l of frak_m (q not in {2,3}) to f when
    q | X, else to g, and check the guaranteed q^{2l} divisibility.

    X = 0 (identical arrangements) sends everything to f, giving
    (f, g) = (frak_m, 1); the permuted pairing gives (1, frak_m).

    Raises
    ------
    LemmaViolationError
        if neither q^{2l} | X nor q^{2l} | Y holds for some q^l, which the
        split lemmas rule out; surfaced loudly rather than absorbed.
    """
    x, y = _int_cross_terms(ctx)
    m = int(ctx.m)
    frak = ctx.frak_m
    f = g = 1
    residual = m // frak
    for q, l in sorted(factorize(frak).items()):
        if q in (2, 3):
            # stays out of the split, mirroring the lemma hypotheses; never
            # hit on tree data, where frak_m is coprime to 6
            residual *= q ** l
            continue
        q2l = q ** (2 * l)
        if x % q == 0:
            if x % q2l != 0:
                raise LemmaViolationError(
                    f"q = {q}: {q}^{2 * l} expected to divide X = {x}")
            f *= q ** l
        else:
            if y % q2l != 0:
                raise LemmaViolationError(
                    f"q = {q}: {q}^{2 * l} expected to divide Y = {y}")
            g *= q ** l
    return FGFactorization(f=f, g=g, m=m, frak_m=frak, x=x, y=y,
                           residual_23=residual)


@dataclass(frozen=True)
class PrimeAudit:
    """Per-prime findings of the split lemmas for one context."""

    q: int
    exponent: int  # q^l exactly divides frak_m
    divides_x: bool
    divides_y: bool
    divides_w: bool  # a1 a2 + c1 c2
    divides_v: bool  # a1 c2 + c1 a2
    misses_one_of_y_w: bool     # q fails to divide at least one of W, Y
    misses_one_of_x_v: bool     # and at least one of X, V
    iff_x_w: bool               # q | X <=> q | W
    iff_y_v: bool               # q | Y <=> q | V
    q2l_split: bool             # q^{2l} divides X or Y


@dataclass(frozen=True)
class LemmaReport:
    m: int
    frak_m: int
    f: int
    g: int
    x: int
    y: int
    identity_holds: bool
    primes: tuple[PrimeAudit, ...]
    size_hypothesis: str   # "met" iff the component sets are disjoint
    size_conclusion: bool | None  # f and g both have a prime besides 2, 3

    def all_pass(self) -> bool:
        return self.identity_holds and all(
            p.misses_one_of_y_w and p.misses_one_of_x_v
            and p.iff_x_w and p.iff_y_v and p.q2l_split
            for p in self.primes
        )


def lemma_audit(ctx: PairContext) -> LemmaReport:
    """Evaluate every split lemma on one context; findings, not assertions.

    The size statement (both f and g carry a prime other than 2, 3) only
    applies to pairs of distinct triples; its hypothesis
    {a1, c1} cap {a2, c2} = empty never holds on realizable data and is
    recorded as such instead of being vacuously asserted.
    """
    a1, _, c1 = (int(v) for v in ctx.arr1.as_tuple())
    a2, _, c2 = (int(v) for v in ctx.arr2.as_tuple())
    x, y = _int_cross_terms(ctx)
    w = a1 * a2 + c1 * c2
    v = a1 * c2 + c1 * a2
    fg = fg_factorization(ctx)
    lhs, rhs = cross_term_identity(ctx)

    audits = []
    for q, l in sorted(factorize(ctx.frak_m).items()):
        if q in (2, 3):
            continue
        dx, dy = x % q == 0, y % q == 0
        dw, dv = w % q == 0, v % q == 0
        q2l = q ** (2 * l)
        audits.append(PrimeAudit(
            q=q, exponent=l,
            divides_x=dx, divides_y=dy, divides_w=dw, divides_v=dv,
            misses_one_of_y_w=not (dw and dy),
            misses_one_of_x_v=not (dx and dv),
            iff_x_w=dx == dw,
            iff_y_v=dy == dv,
            q2l_split=(x % q2l == 0) or (y % q2l == 0),
        ))

    disjoint = not ({a1, c1} & {a2, c2})
    if disjoint:
        def has_big_prime(n):
            return any(q not in (2, 3) for q in factorize(n))
        conclusion = has_big_prime(fg.f) and has_big_prime(fg.g)
        hypothesis = "met"
    else:
        conclusion = None
        hypothesis = "hypothesis-not-met"

    return LemmaReport(
        m=int(ctx.m), frak_m=ctx.frak_m, f=fg.f, g=fg.g, x=x, y=y,
        identity_holds=lhs == rhs, primes=tuple(audits),
        size_hypothesis=hypothesis, size_conclusion=conclusion,
    )
