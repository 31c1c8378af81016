"""Cheap O(n^2) lower bounds on ``u = <A>^-1 mag(b)`` and ``d = diag(<A>^-1)``.

Both come from truncating the Neumann series of ``(I - rad A)^-1``; every
term is nonnegative, so truncation and downward rounding keep them valid
lower bounds.  The optional ``counter`` records scalar floating-point
operations (one multiply or one add each) under the key ``"flops"``.
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

import numpy as np

from . import rounding as rd
from .errors import DegenerateBoundError
from .interval import mag
from .linsys import IntervalLinearSystem


def _tick(counter: Optional[Counter], n: int) -> None:
    if counter is not None:
        counter["flops"] += n


def cheap_lower_bound_u(sys: IntervalLinearSystem, counter: Optional[Counter] = None) -> np.ndarray:
    """``mag(b) + P (mag(b) + P mag(b))`` rounded down, with ``P = rad A``."""
    p = sys.radius_matrix()
    n = sys.n
    mb = mag(sys.b)
    inner = rd.add_down(mb, rd.matvec_down(p, mb))
    _tick(counter, 2 * n * n + n)
    out = rd.add_down(mb, rd.matvec_down(p, inner))
    _tick(counter, 2 * n * n + n)
    return out


def cheap_lower_bound_d(sys: IntervalLinearSystem, counter: Optional[Counter] = None) -> np.ndarray:
    """``upper(a_ii) / (1 - (P^2)_ii)`` with the numerator down and the denominator up."""
    p = sys.radius_matrix()
    n = sys.n
    sq = rd.dot_down(p, p.T)  # row i of p against column i of p
    _tick(counter, 2 * n * n)
    den = rd.sub_up(1.0, sq)
    if np.any(den <= 0):
        raise DegenerateBoundError("1 - (rad A)^2_ii is not positive; system is not certified")
    out = rd.div_down(np.diag(sys.a.hi), den)
    _tick(counter, 2 * n)
    return out
