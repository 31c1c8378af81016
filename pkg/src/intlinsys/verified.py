"""Verified enclosures of the auxiliary real systems behind ``u`` and ``d``."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import rounding as rd
from .bounds import cheap_lower_bound_d
from .errors import NonSquareError, VerificationFailedError
from .interval import IntervalVector, mag, matmul
from .linsys import IntervalLinearSystem, certify_regular


class UDMode(enum.Enum):
    CHEAP = "cheap"
    EXACT = "exact"


class UDSource(enum.Enum):
    CHEAP_BOUND = "cheap-bound"
    VERIFIED_EXACT = "verified-exact"


@dataclass(frozen=True)
class UDBounds:
    """Enclosure of ``u``, lower bound on ``d`` and the shrink factors ``gamma``.

    ``d_enc`` is only present for ``VERIFIED_EXACT``; the hull formula needs both
    endpoints of ``d``.
    """

    u_enc: IntervalVector
    d_lo: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)
    source: UDSource
    d_enc: Optional[IntervalVector] = None

    @property
    def u_lo(self) -> np.ndarray:
        return np.asarray(self.u_enc.lo)

    @property
    def u_hi(self) -> np.ndarray:
        return np.asarray(self.u_enc.hi)

    def with_gamma(self, gamma) -> "UDBounds":
        return UDBounds(self.u_enc, self.d_lo, np.asarray(gamma, dtype=np.float64), self.source, self.d_enc)


def _approx_inverse(m: np.ndarray) -> np.ndarray:
    try:
        s = np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise VerificationFailedError("matrix is numerically singular") from exc
    if not np.all(np.isfinite(s)):
        raise VerificationFailedError("approximate inverse is not finite")
    return s


def _contraction(m: np.ndarray):
    """Approximate inverse ``S``, rigorous row sums of ``|I - S M|`` and their max."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquareError(f"matrix must be square, got {m.shape}")
    n = m.shape[0]
    s = _approx_inverse(m)
    sm_lo, sm_hi = rd.matmul_bounds(s, m)
    eye = np.eye(n)
    defect = np.maximum(np.abs(rd.sub_down(eye, sm_hi)), np.abs(rd.sub_up(eye, sm_lo)))
    rows = rd.sum_up(defect, axis=1)
    beta = float(np.max(rows)) if n else 0.0
    if not beta < 1:
        raise VerificationFailedError(f"||I - S M||_inf = {beta:.3g} is not below 1")
    return s, rows, beta


def _error_bound(s: np.ndarray, r_mag: np.ndarray, rows: np.ndarray, beta: float) -> np.ndarray:
    """Componentwise bound on ``M^-1 r`` for each column ``r`` with ``|r| <= r_mag``.

    With ``e = M^-1 r`` we have ``e = S r + (I - S M) e``; taking norms gives
    ``||e|| <= ||S r|| / (1 - beta)`` and then ``|e| <= |S r| + rows * ||e||``.
    """
    sr = rd.abs_matmul_up(np.abs(s), r_mag)
    norm = np.max(sr, axis=0)
    eps = rd.div_up(norm, rd.sub_down(1.0, beta))
    return rd.add_up(sr, rd.mul_up(rows[:, None], eps[None, :]))


def _enclose(m: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Bounds of ``m^-1 c`` (``c`` 2-D), two correction stages deep.

    ``x1`` is a refined float solution; its residual is enclosed in doubled
    precision, a float correction ``y`` is solved for, and only the
    residual of that correction enters the error bound.  The enclosure width
    is then limited by float spacing near the solution rather than by
    ``cond(m) * eps``.
    """
    s, rows, beta = _contraction(m)
    x1 = s @ c
    x1 = x1 + s @ (c - m @ x1)
    r_lo, r_hi = rd.residual_bounds(c, m, x1)
    y = s @ (0.5 * (r_lo + r_hi))
    my = matmul(m, y)
    rho = np.maximum(np.abs(rd.sub_down(r_lo, my.hi)), np.abs(rd.sub_up(r_hi, my.lo)))
    err = _error_bound(s, rho, rows, beta)
    return rd.sub_down(rd.add_down(x1, y), err), rd.add_up(rd.add_up(x1, y), err)


def verified_point_solve(m, c) -> IntervalVector:
    """Enclose ``m^-1 c`` for real ``m`` and ``c``."""
    m = np.asarray(m, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    lo, hi = _enclose(m, c[:, None])
    return IntervalVector(lo[:, 0], hi[:, 0])


def verified_inverse_diag(m) -> IntervalVector:
    """Enclose ``diag(m^-1)``; the ``n`` unit-vector solves are done as one block."""
    m = np.asarray(m, dtype=np.float64)
    lo, hi = _enclose(m, np.eye(m.shape[0]))
    return IntervalVector(np.diag(lo).copy(), np.diag(hi).copy())


def gamma_from_d(sys: IntervalLinearSystem, d_lo: np.ndarray) -> np.ndarray:
    """``<a_ii> - 1/d_lo`` rounded down and clamped at zero."""
    comp_diag = np.diag(sys.a.lo)
    g = rd.sub_down(comp_diag, rd.div_up(1.0, d_lo))
    return np.maximum(g, 0.0)


def solve_u(sys: IntervalLinearSystem) -> IntervalVector:
    """Verified enclosure of ``u = <A>^-1 mag(b)``, clipped below at ``mag(b)``."""
    u = verified_point_solve(sys.comparison(), mag(sys.b))
    # <A>^-1 >= I entrywise on the diagonal, so u >= mag(b) always holds
    return IntervalVector(np.maximum(u.lo, mag(sys.b)), np.maximum(u.hi, mag(sys.b)))


def assemble_ud(sys: IntervalLinearSystem, mode: UDMode = UDMode.CHEAP) -> UDBounds:
    """Collect ``u``, ``d`` and ``gamma`` for a certified midpoint-identity system."""
    certify_regular(sys).require()
    mode = UDMode(mode)
    u = solve_u(sys)
    if mode is UDMode.EXACT:
        d_enc = verified_inverse_diag(sys.comparison())
        # diag((I - P)^-1) = sum_k diag(P^k) >= 1
        d_enc = IntervalVector(np.maximum(d_enc.lo, 1.0), np.maximum(d_enc.hi, 1.0))
        d_lo = np.asarray(d_enc.lo)
        return UDBounds(u, d_lo, gamma_from_d(sys, d_lo), UDSource.VERIFIED_EXACT, d_enc)
    d_lo = cheap_lower_bound_d(sys)
    return UDBounds(u, d_lo, gamma_from_d(sys, d_lo), UDSource.CHEAP_BOUND)
