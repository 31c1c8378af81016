"""The gamma-parameterised operator and the magnitude method built on it.

For a preconditioned system (mid A = I, off-diagonal entries symmetric about 0)
row ``i`` of the operator is

    (b_i + (w_i - g_i) [-1, 1]) / (a_ii + gamma_i [-1, 1])

with ``w_i = sum_{j != i} rad(a_ij) mag(x_j)`` and ``g_i = gamma_i u_i``.
For ``gamma = 0`` this is exactly the Jacobi-form Gauss-Seidel row.  ``w`` is
rounded up and ``g`` down; ``w - g`` may be negative, in which case the
numerator lies strictly inside ``b_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rounding as rd
from .bounds import cheap_lower_bound_d, cheap_lower_bound_u
from .classic import StoppingRule, gauss_seidel_step, iterate
from .errors import EmptyIntersectionError
from .interval import Empty, Interval, IntervalVector, intersect, mag
from .linsys import Form, IntervalLinearSystem, certify_regular, prepare
from .verified import UDBounds, UDMode, UDSource, assemble_ud, solve_u

__all__ = [
    "OperatorInputs",
    "cheap_lower_bound_u",
    "cheap_lower_bound_d",
    "new_operator",
    "new_operator_row",
    "magnitude_enclosure",
    "magnitude_enclosure_gamma0",
    "gs_then_operator",
]


@dataclass(frozen=True)
class OperatorInputs:
    sys: IntervalLinearSystem
    x: IntervalVector
    ud: UDBounds


def _rows(sys: IntervalLinearSystem, x: IntervalVector, ud: UDBounds, idx) -> IntervalVector:
    p = sys.radius_matrix()
    np.fill_diagonal(p, 0.0)
    gamma = np.asarray(ud.gamma, dtype=np.float64)[idx]
    w = rd.matvec_up(p[idx], mag(x))
    g = rd.mul_down(gamma, ud.u_lo[idx])
    h = rd.sub_up(w, g)
    b_lo, b_hi = sys.b.lo[idx], sys.b.hi[idx]
    num_lo, num_hi = rd.sub_down(b_lo, h), rd.add_up(b_hi, h)
    if np.any(num_lo > num_hi):
        raise EmptyIntersectionError("operator numerator is improper; gamma exceeds alpha or x is not an enclosure")
    d_lo = rd.sub_down(np.diag(sys.a.lo)[idx], gamma)
    d_hi = rd.add_up(np.diag(sys.a.hi)[idx], gamma)
    if np.any(d_lo <= 0):
        raise EmptyIntersectionError("operator denominator is not positive")
    out = IntervalVector(num_lo, num_hi) / IntervalVector(d_lo, d_hi)
    box = IntervalVector(x.lo[idx], x.hi[idx])
    if np.any(gamma > 0):
        # the gamma = 0 image also encloses; meeting it keeps rounding from
        # pushing an endpoint past the Gauss-Seidel one
        plain = IntervalVector(rd.sub_down(b_lo, w), rd.add_up(b_hi, w))
        plain = plain / IntervalVector(np.diag(sys.a.lo)[idx], np.diag(sys.a.hi)[idx])
        box = intersect(box, plain)
        if box is Empty:
            raise EmptyIntersectionError("Gauss-Seidel image misses the current box")
    met = intersect(out, box)
    if met is Empty:
        raise EmptyIntersectionError("operator image misses the current box")
    return met


def new_operator(sys: IntervalLinearSystem, x: IntervalVector, ud: UDBounds) -> IntervalVector:
    """Apply the operator to every row of ``x`` at once."""
    return _rows(sys, x, ud, np.arange(sys.n))


def new_operator_row(inputs: OperatorInputs, i: int) -> Interval:
    """Row ``i`` of the operator, intersected with ``x_i``."""
    return _rows(inputs.sys, inputs.x, inputs.ud, np.array([i]))[0]


def _ready(sys: IntervalLinearSystem) -> IntervalLinearSystem:
    return sys if sys.form is Form.MIDPOINT_IDENTITY else prepare(sys)


def magnitude_from_bounds(sys: IntervalLinearSystem, ud: UDBounds) -> IntervalVector:
    """Step 3 of the magnitude method: one operator pass on ``[-u_hi, u_hi]``."""
    return new_operator(sys, IntervalVector.symmetric(ud.u_hi), ud)


def magnitude_enclosure(sys: IntervalLinearSystem, mode: UDMode = UDMode.CHEAP) -> IntervalVector:
    """Enclose the solution set by the magnitude method.

    ``mode`` selects how ``d`` is bounded: ``CHEAP`` uses the O(n^2) series
    bound, ``EXACT`` a verified enclosure of ``diag(<A>^-1)``.
    """
    sys = _ready(sys)
    return magnitude_from_bounds(sys, assemble_ud(sys, mode))


def gamma0_bounds(sys: IntervalLinearSystem) -> UDBounds:
    certify_regular(sys).require()
    u = solve_u(sys)
    return UDBounds(u, np.ones(sys.n), np.zeros(sys.n), UDSource.CHEAP_BOUND)


def magnitude_enclosure_gamma0(sys: IntervalLinearSystem) -> IntervalVector:
    """Magnitude method with ``gamma = 0``; no bound on ``d`` is computed."""
    sys = _ready(sys)
    return magnitude_from_bounds(sys, gamma0_bounds(sys))


def gs_then_operator(
    sys: IntervalLinearSystem,
    gs_iters: int,
    mode: UDMode = UDMode.CHEAP,
    gamma0: bool = False,
    ud: Optional[UDBounds] = None,
    u_lower: str = "verified",
    x0: Optional[IntervalVector] = None,
    stop: Optional[StoppingRule] = None,
) -> IntervalVector:
    """Run Gauss-Seidel steps, then one operator pass.

    The iteration starts from ``[-u_hi, u_hi]`` unless ``x0`` is given and stops
    after ``gs_iters`` steps (or earlier under ``stop``).  ``u_lower`` picks the
    lower bound on ``u`` in the shrink term: ``"verified"`` uses the verified
    enclosure, ``"cheap"`` the O(n^2) series bound.
    """
    sys = _ready(sys)
    if ud is None:
        ud = gamma0_bounds(sys) if gamma0 else assemble_ud(sys, mode)
    if u_lower == "cheap":
        u_lo = np.minimum(cheap_lower_bound_u(sys), ud.u_lo)
        ud = UDBounds(IntervalVector(u_lo, ud.u_hi), ud.d_lo, ud.gamma, ud.source, ud.d_enc)
    elif u_lower != "verified":
        raise ValueError(f"u_lower must be 'verified' or 'cheap', got {u_lower!r}")
    start = IntervalVector.symmetric(ud.u_hi) if x0 is None else x0
    rule = StoppingRule(tol=stop.tol if stop else StoppingRule.tol, max_iter=gs_iters)
    x = iterate(sys, gauss_seidel_step, start, rule).enclosure
    return new_operator(sys, x, ud)
