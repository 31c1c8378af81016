"""Reference enclosures: Krawczyk and interval Gauss-Seidel (Jacobi form), their
closed-form limits, and the Ning-Kearfott hull formula.

All functions expect a preconditioned (midpoint-identity) system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import rounding as rd
from .errors import DomainError, EmptyIntersectionError, VerificationFailedError
from .interval import Empty, IntervalMatrix, IntervalVector, intersect, mag, matvec
from .linsys import IntervalLinearSystem, certify_regular
from .verified import UDBounds, UDSource

Step = Callable[[IntervalLinearSystem, IntervalVector], IntervalVector]


@dataclass(frozen=True)
class StoppingRule:
    tol: float = 1e-12
    max_iter: int = 100

    def settled(self, old: IntervalVector, new: IntervalVector) -> bool:
        scale = 1.0 + np.maximum(np.abs(new.lo), np.abs(new.hi))
        change = np.maximum(np.abs(new.lo - old.lo), np.abs(new.hi - old.hi))
        return bool(np.all(change < self.tol * scale))


@dataclass(frozen=True)
class IterationResult:
    enclosure: IntervalVector
    iterations: int
    converged: bool


def _meet(new: IntervalVector, old: IntervalVector) -> IntervalVector:
    out = intersect(new, old)
    if out is Empty:
        raise EmptyIntersectionError("operator image misses the current box; input box was not an enclosure")
    return out


def _offdiag(a: IntervalMatrix) -> IntervalMatrix:
    lo, hi = a.lo.copy(), a.hi.copy()
    np.fill_diagonal(lo, 0.0)
    np.fill_diagonal(hi, 0.0)
    return IntervalMatrix(lo, hi)


def _diag(a: IntervalMatrix) -> IntervalVector:
    return IntervalVector(np.diag(a.lo), np.diag(a.hi))


def krawczyk_step(sys: IntervalLinearSystem, x: IntervalVector) -> IntervalVector:
    """``(b + (I - A) x) ∩ x``."""
    n = sys.n
    eye = np.eye(n)
    i_minus_a = IntervalMatrix(rd.sub_down(eye, sys.a.hi), rd.sub_up(eye, sys.a.lo))
    return _meet(sys.b + matvec(i_minus_a, x), x)


def gauss_seidel_step(sys: IntervalLinearSystem, x: IntervalVector) -> IntervalVector:
    """Jacobi-form interval Gauss-Seidel: ``(b_i - sum_{j!=i} a_ij x_j) / a_ii ∩ x_i``."""
    diag = _diag(sys.a)
    if np.any((diag.lo <= 0) & (diag.hi >= 0)):
        raise DomainError("a diagonal entry contains zero")
    return _meet((sys.b - matvec(_offdiag(sys.a), x)) / diag, x)


def iterate(
    sys: IntervalLinearSystem,
    step: Step,
    x0: IntervalVector,
    stop: Optional[StoppingRule] = None,
) -> IterationResult:
    """Apply ``step`` until the box stops moving.

    ``iterations`` counts the applications that changed the box; the final
    application that only confirms the fixed point is not counted.
    """
    stop = stop or StoppingRule()
    x = x0
    for k in range(stop.max_iter):
        nxt = step(sys, x)
        if stop.settled(x, nxt):
            return IterationResult(nxt, k, True)
        x = nxt
    return IterationResult(x, stop.max_iter, False)


def initial_box(sys: IntervalLinearSystem) -> IntervalVector:
    """A priori enclosure ``[-beta v, beta v]`` that needs no solve for ``u``.

    From ``x = b + (I - A) x`` we get ``|x| <= mag(b) + P |x|`` with ``P = rad A``;
    for a weight ``v > 0`` with ``P v < v`` this gives
    ``max_i |x_i| / v_i <= beta = max(mag(b) / v) / (1 - max(P v / v))``.
    The weight is ``e`` when ``||P||_inf < 1``, else the certificate witness.
    """
    p = sys.radius_matrix()
    n = sys.n
    v = np.ones(n)
    contraction = float(np.max(rd.matvec_up(p, v))) if n else 0.0
    if not contraction < 1:
        cert = certify_regular(sys)
        cert.require()
        v = cert.witness
        contraction = float(np.max(rd.div_up(rd.matvec_up(p, v), v)))
        if not contraction < 1:
            raise VerificationFailedError("no weighted norm with ||rad A|| < 1 found")
    scale = float(np.max(rd.div_up(mag(sys.b), v))) if n else 0.0
    beta = float(rd.div_up(scale, rd.sub_down(1.0, contraction)))
    return IntervalVector.symmetric(rd.mul_up(beta, v))


def gs_iterative(
    sys: IntervalLinearSystem,
    x0: Optional[IntervalVector] = None,
    stop: Optional[StoppingRule] = None,
) -> IterationResult:
    """Stand-alone interval Gauss-Seidel iteration, by default from :func:`initial_box`."""
    return iterate(sys, gauss_seidel_step, initial_box(sys) if x0 is None else x0, stop)


def _offdiag_widening(sys: IntervalLinearSystem, u_hi: np.ndarray) -> np.ndarray:
    p = sys.radius_matrix()
    np.fill_diagonal(p, 0.0)
    return rd.matvec_up(p, u_hi)


def _widen(b: IntervalVector, w: np.ndarray) -> IntervalVector:
    return IntervalVector(rd.sub_down(b.lo, w), rd.add_up(b.hi, w))


# Both limits are those of the iterations started from [-u, u], so they are
# returned intersected with that box.  They also share the rounded off-diagonal
# sum, which keeps the Gauss-Seidel limit inside the Krawczyk one to the ULP.


def gs_limit(sys: IntervalLinearSystem, ud: UDBounds) -> IntervalVector:
    """Closed-form Gauss-Seidel limit ``D^-1 (b + mag(A') u [-1, 1])``."""
    w = _offdiag_widening(sys, ud.u_hi)
    return _meet(_widen(sys.b, w) / _diag(sys.a), IntervalVector.symmetric(ud.u_hi))


def krawczyk_limit(sys: IntervalLinearSystem, ud: UDBounds) -> IntervalVector:
    """Closed-form Krawczyk limit ``b + rad(A) u [-1, 1]``."""
    w = _offdiag_widening(sys, ud.u_hi)
    own = rd.mul_up(np.diag(sys.radius_matrix()), ud.u_hi)
    return _meet(_widen(_widen(sys.b, w), own), IntervalVector.symmetric(ud.u_hi))


def ning_kearfott_hull(sys: IntervalLinearSystem, ud: UDBounds) -> IntervalVector:
    """Outer enclosure of the interval hull via the Ning-Kearfott formula."""
    if ud.source is not UDSource.VERIFIED_EXACT or ud.d_enc is None:
        raise VerificationFailedError("the hull formula needs two-sided (exact mode) bounds on d")
    d_lo, d_hi = np.asarray(ud.d_enc.lo), np.asarray(ud.d_enc.hi)
    # u/d - mag(b) >= 0 exactly, and rounding u/d up keeps it so
    t = rd.sub_up(rd.div_up(ud.u_hi, d_lo), mag(sys.b))
    numer = _widen(sys.b, t)
    comp_diag = np.diag(sys.a.lo)
    alpha_hi = np.maximum(rd.sub_up(comp_diag, rd.div_down(1.0, d_hi)), 0.0)
    den = IntervalVector(rd.sub_down(comp_diag, alpha_hi), rd.add_up(np.diag(sys.a.hi), alpha_hi))
    if np.any(den.lo <= 0):
        raise VerificationFailedError("hull denominator is not positive")
    # the formula's own rounding can leave it a few ULPs outside the
    # Gauss-Seidel limit, which also encloses the hull
    return _meet(numer / den, gs_limit(sys, ud))
