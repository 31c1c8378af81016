from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from intlinsys import (
    Empty,
    Interval,
    IntervalMatrix,
    IntervalVector,
    comparison_matrix,
    contains,
    intersect,
    mag,
    matmul,
    matvec,
    mid,
    rad,
    subset,
)
from intlinsys.errors import DimensionError, DomainError, IntervalOverflowError, NonSquareError
from intlinsys.interval import hull, mig

endpoint = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e6, max_value=1e6)


@st.composite
def intervals(draw):
    a, b = draw(endpoint), draw(endpoint)
    return Interval(min(a, b), max(a, b))


def test_scalar_examples():
    assert Interval(1, 2) + Interval(3, 4) == Interval(4, 6)
    assert Interval(-1, 1) * Interval(-1, 1) == Interval(-1, 1)
    with pytest.raises(DomainError):
        Interval(1, 2) / Interval(-1, 1)


def test_invalid_endpoints():
    with pytest.raises(DomainError):
        Interval(2, 1)
    with pytest.raises(IntervalOverflowError):
        Interval(0, float("inf"))


def test_from_decimal_rounds_outward():
    x = Interval.from_decimal("0.1")
    assert Fraction(x.lo) < Fraction("0.1") < Fraction(x.hi)
    assert Interval.from_decimal("0.5") == Interval(0.5, 0.5)


def _sound(op, a: Interval, b: Interval, rng, samples=100):
    r = op(a, b)
    xs = rng.uniform(a.lo, a.hi, samples).tolist() + [a.lo, a.hi]
    ys = rng.uniform(b.lo, b.hi, samples).tolist() + [b.lo, b.hi]
    fop = {"+": lambda p, q: p + q, "-": lambda p, q: p - q, "*": lambda p, q: p * q, "/": lambda p, q: p / q}
    for x, y in zip(xs, ys):
        v = fop[op.__name__](Fraction(x), Fraction(y))
        assert Fraction(r.lo) <= v <= Fraction(r.hi)


def _named(fn, name):
    fn.__name__ = name
    return fn


OPS = [
    _named(lambda a, b: a + b, "+"),
    _named(lambda a, b: a - b, "-"),
    _named(lambda a, b: a * b, "*"),
    _named(lambda a, b: a / b, "/"),
]


def test_random_enclosure_soundness():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        e = np.sort(rng.uniform(-50, 50, 2))
        f = np.sort(rng.uniform(-50, 50, 2))
        a, b = Interval(*e), Interval(*f)
        for op in OPS:
            if op.__name__ == "/" and b.lo <= 0 <= b.hi:
                continue
            _sound(op, a, b, rng, samples=25)


@given(intervals(), intervals())
def test_property_soundness(a, b):
    rng = np.random.default_rng(0)
    for op in OPS[:3]:
        _sound(op, a, b, rng, samples=5)


@pytest.mark.parametrize("a,b", [((1, 3), (2, 5)), ((-4, -1), (3, 7)), ((-2, 6), (-3, 1))])
def test_small_integer_results_are_exact(a, b):
    x, y = Interval(*a), Interval(*b)
    prods = [p * q for p in a for q in b]
    assert x * y == Interval(min(prods), max(prods))
    assert x + y == Interval(a[0] + b[0], a[1] + b[1])
    assert x - y == Interval(a[0] - b[1], a[1] - b[0])


def test_mid_rad_mag():
    a = IntervalMatrix([[2.0]], [[4.0]])
    assert mid(a)[0, 0] == 3 and rad(a)[0, 0] == 1
    p = IntervalMatrix([[-3.0]], [[-3.0]])
    assert mid(p)[0, 0] == -3 and rad(p)[0, 0] == 0
    t = IntervalMatrix([[1.0]], [[1.0 + 2.0**-52]])
    m, r = mid(t)[0, 0], rad(t)[0, 0]
    assert r >= 2.0**-53
    assert Fraction(m) - Fraction(r) <= 1 and Fraction(m) + Fraction(r) >= Fraction(1.0 + 2.0**-52)
    assert Interval(-3, 2).mag == 3 and Interval(1, 5).mag == 5 and Interval(0, 0).mag == 0


def test_mid_rad_reconstruction_random():
    rng = np.random.default_rng(11)
    lo = rng.uniform(-1e3, 1e3, (40, 40))
    hi = lo + rng.uniform(0, 1e-3, (40, 40)) * np.abs(lo)
    a = IntervalMatrix(lo, hi)
    m, r = mid(a), rad(a)
    for i, j in zip(*np.nonzero(np.ones((40, 40)))):
        assert Fraction(m[i, j]) - Fraction(r[i, j]) <= Fraction(lo[i, j])
        assert Fraction(m[i, j]) + Fraction(r[i, j]) >= Fraction(hi[i, j])
    ma = mag(a)
    assert np.all(ma >= 0)
    assert np.all(mag(IntervalMatrix(np.zeros((2, 2)))) == 0)


def test_mig():
    assert mig(Interval(-1, 2)) == 0 and mig(Interval(2, 5)) == 2 and mig(Interval(-5, -3)) == 3


def test_comparison_matrix():
    a = IntervalMatrix([[1, -1], [0, 2]], [[3, 1], [2, 4]])
    assert np.array_equal(comparison_matrix(a), [[1, -1], [-2, 2]])
    assert np.array_equal(comparison_matrix(IntervalMatrix(np.eye(3))), np.eye(3))
    r = 0.125
    pre = IntervalMatrix(np.eye(2) - r, np.eye(2) + r)
    assert np.array_equal(comparison_matrix(pre), np.eye(2) - r)
    with pytest.raises(NonSquareError):
        comparison_matrix(IntervalMatrix(np.zeros((2, 3))))


def test_comparison_matrix_offdiagonal_nonpositive():
    rng = np.random.default_rng(5)
    lo = rng.uniform(-5, 5, (6, 6))
    c = comparison_matrix(IntervalMatrix(lo, lo + rng.uniform(0, 2, (6, 6))))
    off = c[~np.eye(6, dtype=bool)]
    assert np.all(off <= 0)


def test_matvec_examples():
    x = IntervalVector([1, -2, 3], [2, -1, 4])
    assert matvec(IntervalMatrix(np.eye(3)), x) == x
    assert matvec(IntervalMatrix([[-1.0]], [[1.0]]), IntervalVector([5.0])) == IntervalVector([-5.0], [5.0])
    with pytest.raises(DimensionError):
        matvec(IntervalMatrix(np.eye(3)), IntervalVector([1.0, 2.0]))


def test_point_matvec_within_one_ulp():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(3, 3))
    x = rng.normal(size=3)
    r = matvec(IntervalMatrix(a), IntervalVector(x))
    for i in range(3):
        exact = sum(Fraction(a[i, k]) * Fraction(x[k]) for k in range(3))
        assert Fraction(r.lo[i]) <= exact <= Fraction(r.hi[i])
        nearest = float(exact)
        assert r.lo[i] >= np.nextafter(nearest, -np.inf) and r.hi[i] <= np.nextafter(nearest, np.inf)


def test_interval_matmul_is_sound():
    rng = np.random.default_rng(10)
    alo = rng.normal(size=(3, 4))
    blo = rng.normal(size=(4, 2))
    a = IntervalMatrix(alo, alo + 0.1)
    b = IntervalMatrix(blo, blo + 0.2)
    c = matmul(a, b)
    for _ in range(200):
        pa = rng.uniform(a.lo, a.hi)
        pb = rng.uniform(b.lo, b.hi)
        assert contains(c, pa @ pb)
    assert (a @ b) == c


def test_set_operations():
    assert intersect(Interval(0, 2), Interval(1, 3)) == Interval(1, 2)
    assert subset(Interval(1, 2), Interval(0, 3))
    assert not subset(Interval(0, 3), Interval(1, 2))
    assert intersect(Interval(0, 1), Interval(2, 3)) is Empty
    assert not Empty
    assert hull(Interval(0, 1), Interval(2, 3)) == Interval(0, 3)
    assert 1.5 in Interval(1, 2) and 3 not in Interval(1, 2)
    v = intersect(IntervalVector([0, 0], [2, 2]), IntervalVector([1, -1], [3, 1]))
    assert v == IntervalVector([1, 0], [2, 1])


def test_arrays_are_immutable_and_indexable():
    v = IntervalVector([1, 2], [3, 4])
    with pytest.raises(ValueError):
        v.lo[0] = 5
    assert v[1] == Interval(2, 4)
    assert len(v) == 2 and list(v) == [Interval(1, 3), Interval(2, 4)]
    m = IntervalMatrix.from_pairs([[["0.1", "0.2"], [1, 2]]])
    assert m.shape == (1, 2) and m[0, 1] == Interval(1, 2)
    assert Fraction(m.lo[0, 0]) <= Fraction("0.1")
