"""Interval linear systems, midpoint-inverse preconditioning and regularity certificates."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import rounding as rd
from .errors import DimensionError, NonSquareError, NotCertifiedError, SingularMidpointError
from .interval import IntervalMatrix, IntervalVector, mid, matmul, matvec


class Form(enum.Enum):
    RAW = "raw"
    MIDPOINT_IDENTITY = "midpoint-identity"


def _is_midpoint_identity(a: IntervalMatrix) -> bool:
    n = a.shape[0]
    eye = np.eye(n)
    # both half-widths must be exact and equal: 1 - lo == hi - 1 on the diagonal,
    # -lo == hi elsewhere
    left_lo, left_hi = rd.sub_down(eye, a.lo), rd.sub_up(eye, a.lo)
    right_lo, right_hi = rd.sub_down(a.hi, eye), rd.sub_up(a.hi, eye)
    exact = np.array_equal(left_lo, left_hi) and np.array_equal(right_lo, right_hi)
    return bool(exact and np.array_equal(left_lo, right_lo))


@dataclass(frozen=True, eq=False)
class IntervalLinearSystem:
    """The family of point systems ``A x = b`` with ``A`` in ``a`` and ``b`` in ``b``."""

    a: IntervalMatrix
    b: IntervalVector
    form: Form = Form.RAW

    def __post_init__(self):
        m, n = self.a.shape
        if m != n:
            raise NonSquareError(f"system matrix must be square, got {self.a.shape}")
        if len(self.b) != n:
            raise DimensionError(f"right-hand side has length {len(self.b)}, expected {n}")
        if self.form is Form.MIDPOINT_IDENTITY:
            if not _is_midpoint_identity(self.a):
                raise ValueError("matrix midpoint is not exactly the identity")
            if np.any(np.diag(self.a.lo) <= 0):
                raise ValueError("diagonal radii must be below 1")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def radius_matrix(self) -> np.ndarray:
        """Exact ``rad A`` of a midpoint-identity system."""
        self._require_identity()
        return self.a.hi - np.eye(self.n)

    def comparison(self) -> np.ndarray:
        """Exact ``<A> = I - rad A`` of a midpoint-identity system."""
        return np.eye(self.n) - self.radius_matrix()

    def _require_identity(self) -> None:
        if self.form is not Form.MIDPOINT_IDENTITY:
            raise ValueError("operation needs a preconditioned (midpoint-identity) system")

    def sample(self, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Draw one point system uniformly from the interval entries."""
        a = rng.uniform(self.a.lo, self.a.hi)
        b = rng.uniform(self.b.lo, self.b.hi)
        return a, b


@dataclass(frozen=True)
class RegularityCertificate:
    witness: np.ndarray = field(repr=False)
    verified: bool

    def require(self) -> None:
        if not self.verified:
            raise NotCertifiedError("could not certify rho(rad A) < 1; refusing to solve")


def approx_mid_inverse(a: IntervalMatrix) -> np.ndarray:
    """Floating-point inverse of ``mid(a)`` by LU with partial pivoting (unverified)."""
    m, n = a.shape
    if m != n:
        raise NonSquareError(f"matrix must be square, got {a.shape}")
    c = np.asarray(mid(a), dtype=np.float64)
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMidpointError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(c, check_finite=True)
    tol = n * np.finfo(np.float64).eps * np.linalg.norm(c, np.inf)
    if tol == 0 or np.min(np.abs(np.diag(lu))) < tol:
        raise SingularMidpointError("midpoint matrix is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), np.eye(n))


def _identity_radius(m: np.ndarray) -> np.ndarray:
    """Round nonnegative radii up onto a grid where ``1 - r`` and ``1 + r`` are exact."""
    e = np.where(m < 1, -52.0, np.ceil(np.log2(1.0 + m)) + 1.0 - 53.0)
    q = np.ldexp(1.0, e.astype(int))
    return np.ceil(m / q) * q


def precondition_relax(sys: IntervalLinearSystem) -> IntervalLinearSystem:
    """Precondition by the midpoint inverse and relax to ``[I - M, I + M] x = R b``.

    ``M`` bounds ``mag(I - R A)`` from above, so the solution set of the result
    contains the original one.
    """
    if sys.form is not Form.RAW:
        raise ValueError("system is already preconditioned")
    n = sys.n
    r = approx_mid_inverse(sys.a)
    ra = matmul(r, sys.a)
    eye = np.eye(n)
    dev_lo = rd.sub_down(eye, ra.hi)
    dev_hi = rd.sub_up(eye, ra.lo)
    m = np.maximum(np.abs(dev_lo), np.abs(dev_hi))
    # m / q and m * q are exact scalings; the ceil rounds the diagonal radius up
    diag = _identity_radius(np.diag(m))
    lo = -m.copy()
    hi = m.copy()
    np.fill_diagonal(lo, rd.sub_down(1.0, diag))
    np.fill_diagonal(hi, rd.add_up(1.0, diag))
    if np.any(diag >= 1):
        # a diagonal radius of 1 already forces rho(rad A) >= 1
        raise NotCertifiedError("preconditioned diagonal contains zero")
    return IntervalLinearSystem(IntervalMatrix(lo, hi), matvec(r, sys.b), Form.MIDPOINT_IDENTITY)


def certify_regular(sys: IntervalLinearSystem) -> RegularityCertificate:
    """Look for ``v > 0`` with ``(I - rad A) v > 0``, which proves ``rho(rad A) < 1``."""
    n = sys.n
    if sys.form is not Form.MIDPOINT_IDENTITY:
        return RegularityCertificate(np.zeros(n), False)
    p = sys.radius_matrix()
    try:
        v = np.linalg.solve(np.eye(n) - p, np.ones(n))
    except np.linalg.LinAlgError:
        return RegularityCertificate(np.zeros(n), False)
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        return RegularityCertificate(np.zeros(n), False)
    slack = rd.sub_down(v, rd.matvec_up(p, v))
    return RegularityCertificate(v, bool(np.all(slack > 0)))


def prepare(sys: IntervalLinearSystem) -> IntervalLinearSystem:
    """Precondition a raw system (if needed) and insist on a regularity certificate."""
    pre = sys if sys.form is Form.MIDPOINT_IDENTITY else precondition_relax(sys)
    certify_regular(pre).require()
    return pre


__all__ = [
    "Form",
    "IntervalLinearSystem",
    "RegularityCertificate",
    "approx_mid_inverse",
    "precondition_relax",
    "certify_regular",
    "prepare",
]
