"""Markoff triples in normalized form and the tree they generate.

Normalized means x^2 + y^2 + z^2 = x*y*z with every component a multiple
of 3; dividing by 3 recovers the classical equation
a^2 + b^2 + c^2 = 3*a*b*c.  A triple is stored sorted, x <= y <= z, one
canonical value per tree vertex.  Branch moves are the Vieta flips
(x, z, x*z - y) and (y, z, y*z - x); walking back with (x, y, x*y - z)
reaches the root (3, 3, 3).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidTripleError, RootHasNoParentError

LEFT = "L"
RIGHT = "R"


def is_markoff(x: int, y: int, z: int) -> bool:
    """True iff (x, y, z) is a positive solution of x^2+y^2+z^2 = xyz."""
    return x > 0 and y > 0 and z > 0 and x * x + y * y + z * z == x * y * z


def is_classical(a: int, b: int, c: int) -> bool:
    """True iff (a, b, c) is a positive solution of a^2+b^2+c^2 = 3abc."""
    return a > 0 and b > 0 and c > 0 and a * a + b * b + c * c == 3 * a * b * c


@dataclass(frozen=True)
class MarkoffTriple:
    """Sorted normalized Markoff solution; components are multiples of 3.

    Orders by (z, y, x), so sorted sequences run by ascending dominant.
    """

    x: int
    y: int
    z: int

    def __lt__(self, other: "MarkoffTriple") -> bool:
        return (self.z, self.y, self.x) < (other.z, other.y, other.x)

    def __post_init__(self):
        if not (self.x <= self.y <= self.z):
            raise InvalidTripleError("components must be sorted ascending")
        if not is_markoff(self.x, self.y, self.z):
            raise InvalidTripleError(f"{(self.x, self.y, self.z)} does not solve the equation")
        if any(v % 3 for v in (self.x, self.y, self.z)):
            raise InvalidTripleError("normalized components must be multiples of 3")

    @classmethod
    def of(cls, *values) -> "MarkoffTriple":
        return cls(*sorted(int(v) for v in values))

    @property
    def dominant(self) -> int:
        return self.z

    def as_tuple(self):
        return (self.x, self.y, self.z)


ROOT = MarkoffTriple(3, 3, 3)


def children(t: MarkoffTriple) -> set[MarkoffTriple]:
    """The distinct Vieta children; a set because both moves coincide at
    (3,3,3) and (3,3,6)."""
    left = MarkoffTriple.of(t.x, t.z, t.x * t.z - t.y)
    right = MarkoffTriple.of(t.y, t.z, t.y * t.z - t.x)
    return {left, right}


def child(t: MarkoffTriple, step: str) -> MarkoffTriple:
    """Child along one branch letter; LEFT keeps {x, z}, RIGHT keeps {y, z}."""
    if step == LEFT:
        return MarkoffTriple.of(t.x, t.z, t.x * t.z - t.y)
    if step == RIGHT:
        return MarkoffTriple.of(t.y, t.z, t.y * t.z - t.x)
    raise ValueError(f"branch step must be {LEFT!r} or {RIGHT!r}, got {step!r}")


def parent(t: MarkoffTriple) -> MarkoffTriple:
    if t == ROOT:
        raise RootHasNoParentError("(3,3,3) has no parent")
    return MarkoffTriple.of(t.x, t.y, t.x * t.y - t.z)


def walk_path(path: str) -> MarkoffTriple:
    """Replay a branch word such as 'LRL' from the root."""
    t = ROOT
    for step in path:
        t = child(t, step)
    return t


def path_to(t: MarkoffTriple) -> str:
    """Canonical branch word from the root; coinciding children record LEFT."""
    steps: list[str] = []
    while t != ROOT:
        p = parent(t)
        if child(p, LEFT) == t:
            steps.append(LEFT)
        else:
            steps.append(RIGHT)
        t = p
    return "".join(reversed(steps))


def _subtree_below(start: MarkoffTriple, bound: int) -> list[MarkoffTriple]:
    """Iterative work-list BFS, pruning children whose dominant exceeds bound."""
    found: list[MarkoffTriple] = []
    work = [start]
    while work:
        t = work.pop()
        found.append(t)
        for c in children(t):
            if c.dominant <= bound:
                work.append(c)
    return found


def enumerate_below(bound: int, workers: int = 1) -> list[MarkoffTriple]:
    """All triples with dominant <= bound, ascending by (z, y, x).

    The tree is expanded with an explicit work list (no recursion), so the
    depth reached by large bounds costs nothing.  With workers > 1 the
    frontier is split into independent subtrees whose results are merged by
    a deterministic sort, so the output is identical to a serial run.
    """
    bound = int(bound)
    if bound < 3:
        raise ValueError("bound must be >= 3")
    if workers <= 1:
        return sorted(_subtree_below(ROOT, bound))
    # grow a frontier large enough to feed the pool, keeping processed nodes
    done: list[MarkoffTriple] = []
    frontier = [ROOT]
    while frontier and len(frontier) < 4 * workers:
        t = frontier.pop(0)
        done.append(t)
        frontier.extend(c for c in children(t) if c.dominant <= bound)
    if not frontier:
        return sorted(done)
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_subtree_below, frontier, [bound] * len(frontier))
        for part in parts:
            done.extend(part)
    return sorted(set(done))


@dataclass(frozen=True)
class UniquenessReport:
    bound: int
    count: int
    by_dominant: tuple  # ((dominant, (triples...)), ...) sorted by dominant
    duplicates: tuple  # dominants attained by more than one triple

    @property
    def unique(self) -> bool:
        return not self.duplicates


def verify_uniqueness(bound: int, workers: int = 1) -> UniquenessReport:
    """Group every enumerated triple by its dominant member and flag repeats.

    A non-empty ``duplicates`` would contradict the uniqueness theorem for
    the tested range.
    """
    triples = enumerate_below(bound, workers=workers)
    groups: dict[int, list[MarkoffTriple]] = {}
    for t in triples:
        groups.setdefault(t.dominant, []).append(t)
    by_dominant = tuple((d, tuple(groups[d])) for d in sorted(groups))
    dups = tuple(d for d, ts in by_dominant if len(ts) > 1)
    return UniquenessReport(bound=int(bound), count=len(triples),
                            by_dominant=by_dominant, duplicates=dups)


def to_classical(t: MarkoffTriple) -> tuple[int, int, int]:
    return (t.x // 3, t.y // 3, t.z // 3)


def from_classical(a: int, b: int, c: int) -> MarkoffTriple:
    if not is_classical(a, b, c):
        raise InvalidTripleError(f"{(a, b, c)} does not solve the classical equation")
    return MarkoffTriple.of(3 * a, 3 * b, 3 * c)
