"""Directed rounding on float64 arrays without touching the FPU rounding mode.

Every operation is evaluated in round-to-nearest and its exact rounding error
is recovered with an error-free transformation (TwoSum / Dekker TwoProduct).
The nearest result is moved one ULP outward only when the error points the
wrong way, so exact results stay exact.  Where the transformations are not
error-free (operands near overflow, products near underflow) the result is
moved one ULP unconditionally, which is always sound.
"""

from __future__ import annotations

import numpy as np

from .errors import IntervalOverflowError

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_MAX = 2.0**995
_TINY = 2.0**-960

_NEG = -np.inf
_POS = np.inf


def _check_finite(*arrays: np.ndarray) -> None:
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise IntervalOverflowError("interval endpoint overflowed to a non-finite value")


def two_sum(a, b):
    """Return (s, e) with s = fl(a + b) and a + b = s + e exactly."""
    with np.errstate(over="ignore", invalid="ignore"):
        s = a + b
        bb = s - a
        e = (a - (s - bb)) + (b - bb)
    return s, e


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Return (p, e, exact_ok); a * b = p + e exactly wherever exact_ok."""
    # overflow is reported by the callers' finiteness checks
    with np.errstate(over="ignore", invalid="ignore"):
        p = a * b
        ah, al = _split(a)
        bh, bl = _split(b)
        e = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
    ok = (np.abs(a) < _SPLIT_MAX) & (np.abs(b) < _SPLIT_MAX) & (np.abs(p) >= _TINY)
    return p, e, ok


def _down(r, err, ok=None):
    bump = err < 0
    if ok is not None:
        bump = bump | ~ok
    return np.where(bump, np.nextafter(r, _NEG), r)


def _up(r, err, ok=None):
    bump = err > 0
    if ok is not None:
        bump = bump | ~ok
    return np.where(bump, np.nextafter(r, _POS), r)


def _arr(x):
    return np.asarray(x, dtype=np.float64)


def add_down(a, b):
    a, b = _arr(a), _arr(b)
    s, e = two_sum(a, b)
    _check_finite(s)
    return _down(s, e)


def add_up(a, b):
    a, b = _arr(a), _arr(b)
    s, e = two_sum(a, b)
    _check_finite(s)
    return _up(s, e)


def sub_down(a, b):
    return add_down(a, -_arr(b))


def sub_up(a, b):
    return add_up(a, -_arr(b))


def _mul_parts(a, b):
    a, b = _arr(a), _arr(b)
    p, e, ok = two_prod(a, b)
    _check_finite(p)
    # a zero factor gives an exact zero even though |p| < _TINY
    ok = ok | (a == 0) | (b == 0)
    return p, e, ok


def mul_down(a, b):
    p, e, ok = _mul_parts(a, b)
    return _down(p, e, ok)


def mul_up(a, b):
    p, e, ok = _mul_parts(a, b)
    return _up(p, e, ok)


def mul_both(a, b):
    """Return (lower, upper) bounds of the exact product."""
    p, e, ok = _mul_parts(a, b)
    return _down(p, e, ok), _up(p, e, ok)


def _div_parts(a, b):
    a, b = _arr(a), _arr(b)
    if np.any(b == 0):
        raise ZeroDivisionError("division by zero in directed rounding")
    q = a / b
    _check_finite(q)
    p, e, ok = two_prod(q, b)
    # a - p is exact (Sterbenz); the sign of the remainder decides the direction
    r = (a - p) - e
    # sign of (a/b - q) is sign(r) * sign(b)
    err = np.where(b > 0, r, -r)
    ok = (ok & np.isfinite(r) & (np.abs(a) >= _TINY)) | (a == 0)
    return q, err, ok


def div_down(a, b):
    q, err, ok = _div_parts(a, b)
    return _down(q, err, ok)


def div_up(a, b):
    q, err, ok = _div_parts(a, b)
    return _up(q, err, ok)


def dot_down(x, y):
    """Lower bound of the exact sums sum_k x[..., k] * y[..., k]."""
    x, y = np.broadcast_arrays(_arr(x), _arr(y))
    acc = np.zeros(x.shape[:-1])
    for k in range(x.shape[-1]):
        acc = add_down(acc, mul_down(x[..., k], y[..., k]))
    return acc


def dot_up(x, y):
    x, y = np.broadcast_arrays(_arr(x), _arr(y))
    acc = np.zeros(x.shape[:-1])
    for k in range(x.shape[-1]):
        acc = add_up(acc, mul_up(x[..., k], y[..., k]))
    return acc


def matvec_up(m, v):
    """Upper bound of m @ v for real m, v (any signs)."""
    m = _arr(m)
    return dot_up(m, _arr(v)[np.newaxis, :])


def matvec_down(m, v):
    m = _arr(m)
    return dot_down(m, _arr(v)[np.newaxis, :])


def sum_up(x, axis=-1):
    x = np.moveaxis(_arr(x), axis, -1)
    acc = np.zeros(x.shape[:-1])
    for k in range(x.shape[-1]):
        acc = add_up(acc, x[..., k])
    return acc


def sum_down(x, axis=-1):
    x = np.moveaxis(_arr(x), axis, -1)
    acc = np.zeros(x.shape[:-1])
    for k in range(x.shape[-1]):
        acc = add_down(acc, x[..., k])
    return acc


_U = 2.0**-53
_ETA = 2.0**-1074


def _gamma_bound(k: int) -> float:
    """An upper bound of ``2 gamma_k = 2 k u / (1 - k u)``; the 2 also covers the error in ``|A||B|``."""
    if k * _U >= 0.01:
        raise ValueError(f"inner dimension {k} too large for the a priori product bound")
    return float(div_up(mul_up(2.0 * k, _U), sub_down(1.0, k * _U)))


def abs_matmul_up(a, b):
    """Upper bound of ``a @ b`` for nonnegative ``a`` and ``b``, via one BLAS product.

    Any summation order (blocked, FMA) satisfies
    ``|fl(a b) - a b| <= gamma_k a b`` plus an underflow term of ``k eta``.
    """
    a, b = _arr(a), _arr(b)
    k = a.shape[-1]
    c = a @ b
    _check_finite(c)
    pad = mul_up(c, _gamma_bound(k))
    return add_up(add_up(c, pad), (k + 1) * _ETA)


def matmul_bounds(a, b):
    """Lower and upper bounds of the exact product of real matrices ``a @ b``."""
    a, b = _arr(a), _arr(b)
    c = a @ b
    _check_finite(c)
    err = abs_matmul_up(np.abs(a), np.abs(b))
    err = add_up(mul_up(err, _gamma_bound(a.shape[-1])), (a.shape[-1] + 1) * _ETA)
    return sub_down(c, err), add_up(c, err)


def residual_bounds(c, m, x):
    """Lower and upper bounds of ``c - m @ x`` for real ``c``, ``m``, ``x`` (2-D).

    The sum is accumulated with error-free transforms and a compensation
    term, so the result is as accurate as doubled precision would give;
    the rounding of the compensation itself is bounded a priori by
    ``gamma_{3k}`` times the sum of the magnitudes of its terms.
    """
    c, m, x = _arr(c), _arr(m), _arr(x)
    k = m.shape[1]
    s = c.copy()
    comp = np.zeros_like(s)
    budget = np.zeros_like(s)
    loose = np.zeros_like(s)
    for j in range(k):
        a, b = np.broadcast_arrays(-m[:, j, None], x[None, j, :])
        p, e, ok = two_prod(a, b)
        ok = ok | (a == 0) | (b == 0)
        e = np.where(ok, e, 0.0)
        loose = loose + np.where(ok, 0.0, np.abs(p) * 2.0**-52 + _ETA)
        s, sig = two_sum(s, p)
        comp = comp + (sig + e)
        budget = budget + (np.abs(sig) + np.abs(e))
    _check_finite(s, comp, budget)
    # float additions are exact in the subnormal range, so only products
    # (handled through ``loose``) need an underflow allowance
    err = add_up(mul_up(budget, _gamma_bound(3 * k + 2)), mul_up(loose, 2.0))
    return add_down(s, sub_down(comp, err)), add_up(s, add_up(comp, err))
