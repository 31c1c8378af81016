"""Outward-rounded interval scalars, vectors and matrices.

Vectors and matrices keep their endpoints in two read-only float64 arrays so
that every operation is vectorised with numpy.  All values are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from . import rounding as rd
from .errors import DimensionError, DomainError, IntervalOverflowError, NonSquareError


class _Empty:
    """Result of intersecting two disjoint intervals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Empty"

    def __bool__(self) -> bool:
        return False


Empty = _Empty()


def _check_endpoints(lo, hi) -> None:
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise IntervalOverflowError("interval endpoints must be finite")
    if np.any(lo > hi):
        raise DomainError("lower endpoint exceeds upper endpoint")


def outward_from_decimal(text: Union[str, int, float, Fraction]) -> tuple[float, float]:
    """Return the tightest float pair bracketing an exact decimal value."""
    q = Fraction(text)
    f = float(q)
    if not math.isfinite(f):
        raise IntervalOverflowError(f"{text!r} is outside the float64 range")
    lo = f if Fraction(f) <= q else math.nextafter(f, -math.inf)
    hi = f if Fraction(f) >= q else math.nextafter(f, math.inf)
    return lo, hi


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        _check_endpoints(self.lo, self.hi)

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_decimal(cls, lo, hi=None) -> "Interval":
        """Build from exact decimal strings, rounding outward."""
        a, _ = outward_from_decimal(lo)
        _, b = outward_from_decimal(lo if hi is None else hi)
        return cls(a, b)

    @property
    def mid(self) -> float:
        return float(mid(self))

    @property
    def rad(self) -> float:
        return float(rad(self))

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def mig(self) -> float:
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __add__(self, other):
        return add(self, _as_interval(other))

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, _as_interval(other))

    def __rsub__(self, other):
        return sub(_as_interval(other), self)

    def __mul__(self, other):
        return mul(self, _as_interval(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, _as_interval(other))

    def __rtruediv__(self, other):
        return div(_as_interval(other), self)

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(x, x)


# ---------------------------------------------------------------------------
# elementwise kernels on endpoint arrays


def _add(alo, ahi, blo, bhi):
    return rd.add_down(alo, blo), rd.add_up(ahi, bhi)


def _sub(alo, ahi, blo, bhi):
    return rd.sub_down(alo, bhi), rd.sub_up(ahi, blo)


def _mul(alo, ahi, blo, bhi):
    alo, ahi, blo, bhi = np.broadcast_arrays(alo, ahi, blo, bhi)
    if np.array_equal(alo, ahi):
        l1, u1 = rd.mul_both(alo, blo)
        l2, u2 = rd.mul_both(alo, bhi)
        return np.minimum(l1, l2), np.maximum(u1, u2)
    if np.array_equal(blo, bhi):
        return _mul(blo, bhi, alo, ahi)
    lows, ups = [], []
    for x in (alo, ahi):
        for y in (blo, bhi):
            lo_, up_ = rd.mul_both(x, y)
            lows.append(lo_)
            ups.append(up_)
    return np.minimum.reduce(lows), np.maximum.reduce(ups)


def _div(alo, ahi, blo, bhi):
    alo, ahi, blo, bhi = np.broadcast_arrays(alo, ahi, blo, bhi)
    if np.any((blo <= 0) & (bhi >= 0)):
        raise DomainError("division by an interval containing zero")
    lows, ups = [], []
    for x in (alo, ahi):
        for y in (blo, bhi):
            lows.append(rd.div_down(x, y))
            ups.append(rd.div_up(x, y))
    return np.minimum.reduce(lows), np.maximum.reduce(ups)


def _scalar(pair) -> Interval:
    lo, hi = pair
    return Interval(float(lo), float(hi))


def add(a: Interval, b: Interval) -> Interval:
    return _scalar(_add(a.lo, a.hi, b.lo, b.hi))


def sub(a: Interval, b: Interval) -> Interval:
    return _scalar(_sub(a.lo, a.hi, b.lo, b.hi))


def mul(a: Interval, b: Interval) -> Interval:
    return _scalar(_mul(np.float64(a.lo), np.float64(a.hi), np.float64(b.lo), np.float64(b.hi)))


def div(a: Interval, b: Interval) -> Interval:
    return _scalar(_div(np.float64(a.lo), np.float64(a.hi), np.float64(b.lo), np.float64(b.hi)))


# ---------------------------------------------------------------------------
# vectors and matrices


class _IntervalArray:
    ndim: int = -1

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None):
        lo = np.array(lo, dtype=np.float64)
        hi = lo.copy() if hi is None else np.array(hi, dtype=np.float64)
        if lo.shape != hi.shape:
            raise DimensionError(f"endpoint shapes differ: {lo.shape} vs {hi.shape}")
        if lo.ndim != self.ndim:
            raise DimensionError(f"{type(self).__name__} needs {self.ndim}-d endpoints, got {lo.ndim}-d")
        _check_endpoints(lo, hi)
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_pairs(cls, pairs):
        """Build from nested ``[lo, hi]`` pairs; entries may be decimal strings."""
        arr = np.array(pairs, dtype=object)
        if arr.shape[-1:] != (2,):
            raise DimensionError("innermost entries must be [lo, hi] pairs")
        lo = np.empty(arr.shape[:-1])
        hi = np.empty(arr.shape[:-1])
        for idx in np.ndindex(*arr.shape[:-1]):
            a, b = arr[idx]
            if isinstance(a, str) or isinstance(b, str):
                lo[idx] = outward_from_decimal(a)[0]
                hi[idx] = outward_from_decimal(b)[1]
            else:
                lo[idx], hi[idx] = float(a), float(b)
        return cls(lo, hi)

    @property
    def shape(self) -> tuple:
        return self.lo.shape

    def is_point(self) -> bool:
        return bool(np.array_equal(self.lo, self.hi))

    def to_pairs(self) -> list:
        return np.stack([self.lo, self.hi], axis=-1).tolist()

    def __getitem__(self, idx):
        lo, hi = self.lo[idx], self.hi[idx]
        if np.ndim(lo) == 0:
            return Interval(lo, hi)
        if np.ndim(lo) == 1:
            return IntervalVector(lo, hi)
        return IntervalMatrix(lo, hi)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    __hash__ = None

    def __neg__(self):
        return type(self)(-self.hi, -self.lo)

    def _binary(self, other, kernel, reflected=False):
        olo, ohi = _endpoints(other)
        args = (olo, ohi, self.lo, self.hi) if reflected else (self.lo, self.hi, olo, ohi)
        lo, hi = kernel(*args)
        return type(self)(lo, hi)

    def __add__(self, other):
        return self._binary(other, _add)

    def __radd__(self, other):
        return self._binary(other, _add, reflected=True)

    def __sub__(self, other):
        return self._binary(other, _sub)

    def __rsub__(self, other):
        return self._binary(other, _sub, reflected=True)

    def __mul__(self, other):
        return self._binary(other, _mul)

    def __rmul__(self, other):
        return self._binary(other, _mul, reflected=True)

    def __truediv__(self, other):
        return self._binary(other, _div)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_pairs()!r})"


class IntervalVector(_IntervalArray):
    ndim = 1
    __slots__ = ()

    def __len__(self) -> int:
        return self.lo.shape[0]

    def __iter__(self):
        for lo, hi in zip(self.lo, self.hi):
            yield Interval(lo, hi)

    @classmethod
    def from_intervals(cls, items: Iterable[Interval]) -> "IntervalVector":
        items = list(items)
        return cls([x.lo for x in items], [x.hi for x in items])

    @classmethod
    def symmetric(cls, r) -> "IntervalVector":
        """The box ``[-r, r]`` for a nonnegative real vector ``r``."""
        r = np.asarray(r, dtype=np.float64)
        return cls(-r, r)


class IntervalMatrix(_IntervalArray):
    ndim = 2
    __slots__ = ()

    def __matmul__(self, other):
        if isinstance(other, IntervalVector) or np.ndim(_endpoints(other)[0]) == 1:
            return matvec(self, other)
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    @classmethod
    def identity(cls, n: int) -> "IntervalMatrix":
        return cls(np.eye(n))


def _endpoints(x):
    if isinstance(x, (_IntervalArray, Interval)):
        return np.asarray(x.lo, dtype=np.float64), np.asarray(x.hi, dtype=np.float64)
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr


IntervalLike = Union[Interval, IntervalVector, IntervalMatrix]


def mid(x: IntervalLike):
    """Midpoint rounded to nearest."""
    lo, hi = _endpoints(x)
    m = 0.5 * (lo + hi)
    big = ~np.isfinite(m)
    if np.any(big):
        m = np.where(big, 0.5 * lo + 0.5 * hi, m)
    return m if np.ndim(m) else float(m)


def rad(x: IntervalLike):
    """Radius rounded up so that ``[mid - rad, mid + rad]`` covers ``x``."""
    lo, hi = _endpoints(x)
    m = np.asarray(mid(x))
    r = np.maximum(rd.sub_up(m, lo), rd.sub_up(hi, m))
    return r if np.ndim(r) else float(r)


def mag(x: IntervalLike):
    lo, hi = _endpoints(x)
    m = np.maximum(np.abs(lo), np.abs(hi))
    return m if np.ndim(m) else float(m)


def mig(x: IntervalLike):
    lo, hi = _endpoints(x)
    m = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(np.abs(lo), np.abs(hi)))
    return m if np.ndim(m) else float(m)


def comparison_matrix(a: IntervalMatrix) -> np.ndarray:
    """Mignitude on the diagonal, negated magnitude off it (both exact)."""
    if a.shape[0] != a.shape[1]:
        raise NonSquareError(f"comparison matrix needs a square matrix, got {a.shape}")
    c = -mag(a)
    np.fill_diagonal(c, np.diag(mig(a)))
    return c


def matmul(a, b) -> IntervalMatrix:
    """Outward-rounded product of interval (or real) matrices."""
    alo, ahi = _endpoints(a)
    blo, bhi = _endpoints(b)
    if alo.ndim != 2 or blo.ndim != 2 or alo.shape[1] != blo.shape[0]:
        raise DimensionError(f"cannot multiply {alo.shape} by {blo.shape}")
    a_point = np.array_equal(alo, ahi)
    b_point = np.array_equal(blo, bhi)
    m, n = alo.shape[0], blo.shape[1]
    if a_point and b_point:
        # compensated accumulation: within about one ULP of the exact product
        lo, hi = rd.residual_bounds(np.zeros((m, n)), -alo, blo)
        return IntervalMatrix(lo, hi)
    acc_lo = np.zeros((m, n))
    acc_hi = np.zeros((m, n))
    for k in range(alo.shape[1]):
        xl, xh = alo[:, k, None], ahi[:, k, None]
        yl, yh = blo[None, k, :], bhi[None, k, :]
        if a_point:
            l1, u1 = rd.mul_both(*np.broadcast_arrays(xl, yl))
            l2, u2 = rd.mul_both(*np.broadcast_arrays(xl, yh))
            pl, ph = np.minimum(l1, l2), np.maximum(u1, u2)
        else:
            pl, ph = _mul(xl, xh, yl, yh)
        acc_lo = rd.add_down(acc_lo, pl)
        acc_hi = rd.add_up(acc_hi, ph)
    return IntervalMatrix(acc_lo, acc_hi)


def matvec(a, x) -> IntervalVector:
    """Outward-rounded row-wise evaluation of ``a @ x``."""
    xlo, xhi = _endpoints(x)
    if xlo.ndim != 1:
        raise DimensionError("matvec expects a vector right-hand side")
    alo, _ = _endpoints(a)
    if alo.ndim != 2:
        raise DimensionError("matvec expects a matrix left-hand side")
    prod = matmul(a, IntervalMatrix(xlo[:, None], xhi[:, None]))
    return IntervalVector(prod.lo[:, 0], prod.hi[:, 0])


def intersect(a, b):
    """Intersection; returns ``Empty`` if any component pair is disjoint."""
    alo, ahi = _endpoints(a)
    blo, bhi = _endpoints(b)
    lo, hi = np.maximum(alo, blo), np.minimum(ahi, bhi)
    if np.any(lo > hi):
        return Empty
    if isinstance(a, Interval) or np.ndim(lo) == 0:
        return Interval(float(lo), float(hi))
    return (IntervalVector if lo.ndim == 1 else IntervalMatrix)(lo, hi)


def contains(a, x) -> bool:
    """True if every real value of ``x`` lies inside ``a``."""
    alo, ahi = _endpoints(a)
    xlo, xhi = _endpoints(x)
    return bool(np.all(alo <= xlo) and np.all(xhi <= ahi))


def subset(a, b) -> bool:
    """True if ``a`` is contained in ``b``."""
    return contains(b, a)


def hull(a, b):
    alo, ahi = _endpoints(a)
    blo, bhi = _endpoints(b)
    lo, hi = np.minimum(alo, blo), np.maximum(ahi, bhi)
    if np.ndim(lo) == 0:
        return Interval(float(lo), float(hi))
    return (IntervalVector if lo.ndim == 1 else IntervalMatrix)(lo, hi)
