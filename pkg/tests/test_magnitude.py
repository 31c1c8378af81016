from collections import Counter

import numpy as np
import pytest

from intlinsys import (
    Form,
    IntervalLinearSystem,
    IntervalMatrix,
    IntervalVector,
    OperatorInputs,
    StoppingRule,
    UDMode,
    assemble_ud,
    cheap_lower_bound_d,
    cheap_lower_bound_u,
    gauss_seidel_step,
    gs_limit,
    gs_then_operator,
    iterate,
    magnitude_enclosure,
    magnitude_enclosure_gamma0,
    new_operator,
    new_operator_row,
    ning_kearfott_hull,
    precondition_relax,
    subset,
    verified_inverse_diag,
)
from intlinsys import bench, oracle
from intlinsys.errors import DegenerateBoundError, EmptyIntersectionError, NotCertifiedError


def ulp_subset(inner, outer):
    return bool(np.all(inner.lo >= np.nextafter(outer.lo, -np.inf)) and np.all(inner.hi <= np.nextafter(outer.hi, np.inf)))


def ulp_equal(x, y):
    return ulp_subset(x, y) and ulp_subset(y, x)


def random_systems(count, seed, ns=(5, 10, 20), deltas=(0.1, 0.01)):
    for k in range(count):
        cfg = bench.GeneratorConfig(ns[k % len(ns)], deltas[(k // len(ns)) % len(deltas)], seed)
        raw = bench.generate_instance(cfg, k)
        yield raw, precondition_relax(raw)


@pytest.fixture
def point_system():
    return IntervalLinearSystem(IntervalMatrix(np.eye(3)), IntervalVector([2.0, -1.0, 0.5]), Form.MIDPOINT_IDENTITY)


def test_point_system(point_system):
    assert np.array_equal(cheap_lower_bound_u(point_system), [2.0, 1.0, 0.5])
    assert np.array_equal(cheap_lower_bound_d(point_system), np.ones(3))
    assert magnitude_enclosure(point_system) == point_system.b
    assert magnitude_enclosure_gamma0(point_system) == point_system.b


def test_example_one_bounds(example_one):
    pre = precondition_relax(example_one)
    assert np.allclose(cheap_lower_bound_u(pre), [1.1633, 1.4367, 0.9788], atol=5e-4)
    assert np.allclose(cheap_lower_bound_d(pre), [1.2343, 1.2536, 1.2030], atol=5e-4)
    assert np.allclose(
        magnitude_enclosure_gamma0(pre).to_pairs(), [[-1.2813, 0.0167], [0.1849, 1.5637], [-1.0821, 0.0887]], atol=5e-4
    )


def test_example_one_recipe(example_one):
    pre = precondition_relax(example_one)
    x2 = gs_then_operator(pre, gs_iters=4, u_lower="cheap")
    assert np.allclose(x2.to_pairs(), [[-1.2820, -0.0258], [0.2261, 1.5641], [-1.0822, 0.0497]], atol=2e-3)
    gs4 = iterate(pre, gauss_seidel_step, IntervalVector.symmetric(assemble_ud(pre).u_hi), StoppingRule(max_iter=4))
    assert subset(x2, gs4.enclosure)


def test_example_two(example_two):
    pre = precondition_relax(example_two)
    x = magnitude_enclosure(pre)
    assert np.allclose(x.to_pairs(), [[-3.4546, -0.3557], [-1.9091, -0.3741]], atol=5e-4)
    hull = ning_kearfott_hull(pre, assemble_ud(pre, UDMode.EXACT))
    assert bench.tightness_ratio(x, hull) == pytest.approx((3.0989 + 1.5350) / (3.0547 + 1.4974), abs=1e-3)


def test_raw_systems_are_preconditioned(example_two):
    assert magnitude_enclosure(example_two) == magnitude_enclosure(precondition_relax(example_two))


def test_gamma_zero_row_is_gauss_seidel_row():
    for _, pre in random_systems(20, 3):
        ud = assemble_ud(pre).with_gamma(np.zeros(pre.n))
        x = IntervalVector.symmetric(ud.u_hi)
        gs = gauss_seidel_step(pre, x)
        inputs = OperatorInputs(pre, x, ud)
        for i in range(pre.n):
            row = new_operator_row(inputs, i)
            assert ulp_equal(IntervalVector([row.lo], [row.hi]), IntervalVector([gs.lo[i]], [gs.hi[i]]))


def test_exact_gamma_gives_hull():
    for _, pre in random_systems(50, 5, ns=(2, 4, 6, 8, 10)):
        exact = magnitude_enclosure(pre, UDMode.EXACT)
        hull = ning_kearfott_hull(pre, assemble_ud(pre, UDMode.EXACT))
        assert np.max(np.abs(np.array(exact.to_pairs()) - np.array(hull.to_pairs()))) <= 1e-9


def test_dominance_and_gamma0_identity():
    for _, pre in random_systems(60, 7):
        ud = assemble_ud(pre)
        lim = gs_limit(pre, ud)
        assert ulp_subset(magnitude_enclosure(pre), lim)
        assert ulp_equal(magnitude_enclosure_gamma0(pre), lim)


def test_magnitude_preserved_on_dominant_side():
    for _, pre in random_systems(40, 9):
        ud = assemble_ud(pre)
        x = magnitude_enclosure(pre)
        m = np.maximum(np.abs(x.lo), np.abs(x.hi))
        assert np.all(m <= ud.u_hi) and np.all(m >= ud.u_lo)


def test_monotone_in_gamma():
    for _, pre in random_systems(20, 11):
        exact = assemble_ud(pre, UDMode.EXACT)
        x = IntervalVector.symmetric(exact.u_hi)
        prev = None
        for t in np.linspace(0.0, 1.0, 6):
            cur = new_operator(pre, x, exact.with_gamma(t * exact.gamma))
            if prev is not None:
                assert ulp_subset(cur, prev)
            prev = cur


def test_gamma_beyond_alpha_is_rejected(example_one):
    pre = precondition_relax(example_one)
    ud = assemble_ud(pre, UDMode.EXACT)
    big = ud.with_gamma(np.full(pre.n, 0.99) * np.diag(pre.a.lo))
    with pytest.raises(EmptyIntersectionError):
        new_operator(pre, IntervalVector.symmetric(ud.u_hi), big)


def test_cheap_bounds_below_verified_values():
    for _, pre in random_systems(60, 13):
        ud = assemble_ud(pre)
        assert np.all(cheap_lower_bound_u(pre) <= ud.u_lo)
        assert np.all(cheap_lower_bound_d(pre) <= verified_inverse_diag(pre.comparison()).lo)


@pytest.mark.parametrize("n", [10, 100])
def test_cheap_bounds_operation_count(n):
    rng = np.random.default_rng(n)
    r = np.ceil(rng.uniform(0, 0.5 / n, (n, n)) * 2**30) / 2**30
    sys = IntervalLinearSystem(IntervalMatrix(np.eye(n) - r, np.eye(n) + r), IntervalVector(rng.normal(size=n)), Form.MIDPOINT_IDENTITY)
    cu, cd = Counter(), Counter()
    cheap_lower_bound_u(sys, cu)
    cheap_lower_bound_d(sys, cd)
    assert cu["flops"] / n**2 <= 8 and cd["flops"] / n**2 <= 8


def test_degenerate_d_bound():
    r = np.full((2, 2), 0.75)
    sys = IntervalLinearSystem(IntervalMatrix(np.eye(2) - r, np.eye(2) + r), IntervalVector([1.0, 1.0]), Form.MIDPOINT_IDENTITY)
    with pytest.raises(DegenerateBoundError):
        cheap_lower_bound_d(sys)
    with pytest.raises(NotCertifiedError):
        magnitude_enclosure(sys)


def test_recipe_with_zero_gs_steps_is_magnitude():
    for _, pre in random_systems(20, 15):
        assert ulp_equal(gs_then_operator(pre, gs_iters=0), magnitude_enclosure(pre))


def test_recipe_gamma0_is_plain_iteration():
    for _, pre in random_systems(10, 17):
        ud = assemble_ud(pre)
        gs = iterate(pre, gauss_seidel_step, IntervalVector.symmetric(ud.u_hi), StoppingRule(max_iter=3)).enclosure
        assert ulp_equal(gs_then_operator(pre, gs_iters=3, gamma0=True), gauss_seidel_step(pre, gs))


def test_recipe_rejects_unknown_lower_bound(example_one):
    with pytest.raises(ValueError):
        gs_then_operator(example_one, 2, u_lower="median")


def test_soundness_against_rational_oracle(rng):
    for raw, pre in random_systems(40, 19, ns=(2, 3, 4, 5)):
        encs = [magnitude_enclosure(pre), magnitude_enclosure(pre, UDMode.EXACT), gs_then_operator(pre, 2, u_lower="cheap")]
        for _ in range(30):
            a, b = raw.sample(rng)
            x = oracle.solve_exact(a, b)
            assert all(oracle.inside(e.lo, e.hi, x) for e in encs)
