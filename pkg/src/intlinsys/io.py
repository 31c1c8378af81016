"""JSON problem files.

    {"n": 2, "A": [[["-4", "-2"], ["8", "10"]], ...], "b": [["-6", "-4"], ...]}

Endpoints are decimal strings (numbers are accepted too) and are rounded
outward on parse, so a file never describes less than its text says.
Written files spell out the exact decimal value of every float endpoint, so
the outward rounding on read is a no-op and a write/read cycle is exact.
"""

from __future__ import annotations

import json
from decimal import Decimal
from pathlib import Path
from typing import Union

from .interval import IntervalMatrix, IntervalVector
from .linsys import IntervalLinearSystem

PathLike = Union[str, Path]


class ProblemFileError(ValueError):
    """A problem document is malformed or inconsistent."""


def system_to_dict(sys: IntervalLinearSystem) -> dict:
    def pairs(x):
        return [[str(Decimal(float(lo))), str(Decimal(float(hi)))] for lo, hi in x]

    return {
        "n": sys.n,
        "A": [pairs(zip(lo_row, hi_row)) for lo_row, hi_row in zip(sys.a.lo, sys.a.hi)],
        "b": pairs(zip(sys.b.lo, sys.b.hi)),
    }


def system_from_dict(doc: dict) -> IntervalLinearSystem:
    try:
        n = int(doc["n"])
        a = IntervalMatrix.from_pairs([[[str(v) for v in e] for e in row] for row in doc["A"]])
        b = IntervalVector.from_pairs([[str(v) for v in e] for e in doc["b"]])
    except (KeyError, TypeError, ValueError, ArithmeticError) as exc:
        raise ProblemFileError(f"malformed problem document: {exc}") from exc
    if a.shape != (n, n) or len(b) != n:
        raise ProblemFileError(f"declared n={n} does not match A {a.shape} / b ({len(b)})")
    return IntervalLinearSystem(a, b)


def dumps(sys: IntervalLinearSystem) -> str:
    return json.dumps(system_to_dict(sys))


def loads(text: str) -> IntervalLinearSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("problem document must be a JSON object")
    return system_from_dict(doc)


def save(sys: IntervalLinearSystem, path: PathLike) -> None:
    Path(path).write_text(dumps(sys) + "\n", encoding="utf-8")


def load(path: PathLike) -> IntervalLinearSystem:
    return loads(Path(path).read_text(encoding="utf-8"))
