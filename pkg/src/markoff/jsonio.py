"""JSON encoding conventions for the CLI.

Integers travel as decimal strings (they routinely exceed 2^53), rationals
as "num/den" with the denominator omitted when 1, matrices and vectors as
row-major nested arrays of such strings.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .linalg import Mat3


def scalar_str(v) -> str:
    f = Fraction(v)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def mat_rows(m: Mat3) -> list[list[str]]:
    return [[scalar_str(v) for v in row] for row in m.rows]


def vec_entries(v) -> list[str]:
    return [scalar_str(x) for x in v]


def triple_record(t, path: str | None = None) -> dict:
    rec = {
        "x": scalar_str(t.x),
        "y": scalar_str(t.y),
        "z": scalar_str(t.z),
        "classical": [scalar_str(v // 3) for v in (t.x, t.y, t.z)],
    }
    if path is not None:
        rec["path"] = path
    return rec


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
