import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfi.pathspace import (
    BasicOpenSet,
    PathSpace,
    SequenceValue,
    classical_action,
    covers_fiber,
    discrete_action,
    exact_mu_sum,
    operator_side,
    path_phase_sum,
    restricted_path_set,
    riemann_integral,
    sample_path,
    path_space_estimate,
)
from lfi.potentials import free
from lfi.units import DeltaSchedule, LatticeSequence


@pytest.fixture(scope="module")
def space(units):
    return PathSpace(LatticeSequence((6, 12)), DeltaSchedule.constant(1, 3), units)


@pytest.fixture(scope="module")
def space3(units):
    return PathSpace(LatticeSequence((6, 12, 24)), DeltaSchedule.constant(1, 4), units)


def cells_strategy(lv):
    return st.tuples(*[st.integers(lv.axis(j).lo, lv.axis(j).hi - 1) for j in range(lv.n_star + 1)])


def test_sample_zero_path(space):
    p = sample_path(lambda s: 0.0, space)
    for k in space.levels:
        assert all(v == 0 for v in p.values(k))


def test_sample_linear_path(space, units):
    p = sample_path(lambda s: s / units.t, space)
    assert p.values(1) == [Fraction(j, 4) for j in range(5)]


def test_sample_below_grid_falls_back_to_minimum(space):
    p = sample_path(lambda s: -1e6, space)
    lv = space.level(1)
    assert p.tables[1] == tuple(lv.axis(j).lo for j in range(lv.n_star + 1))


def test_action_of_constant_paths(space, units, harmonic):
    c = Fraction(1, 3)
    zero = discrete_action(sample_path(lambda s: float(c), space), free())
    assert np.allclose(zero.entries, 0)
    act = discrete_action(sample_path(lambda s: float(c), space), harmonic)
    assert np.allclose(act.real(), -units.t * harmonic(float(c)), rtol=1e-9)


def test_straight_line_free_action(units):
    lat = LatticeSequence.nk_sequence(4)
    sp = PathSpace(lat, DeltaSchedule.constant(3, 4), units)
    act = discrete_action(sample_path(lambda s: s / units.t, sp), free())
    cl, _ = classical_action(lambda s: s / units.t, free(), units, lambda s: 1 / units.t)
    assert math.isclose(cl, units.m / (2 * units.t))
    assert abs(act[3].real - cl) / cl < 1e-3


def test_point_measure_at_own_level(space):
    lv = space.level(1)
    cell = BasicOpenSet(1, (0,) * (lv.n_star + 1))
    assert space.mu_star(cell, 1) == Fraction(2, lv.n_d) ** 2


def test_mu_star_fiber_count_matches_enumeration(space):
    lv1 = space.level(1)
    x = (1, -3, 5, 0, -2)
    cell = BasicOpenSet(1, x)
    lv2 = space.level(2)
    # projection is coordinatewise, so the fiber is a product of per-axis preimages
    count = 1
    for j in range(lv2.n_star + 1):
        ax2, ax1 = lv2.axis(j), lv1.axis(j)
        count *= sum(1 for v in range(ax2.lo, ax2.hi) if ax1.floor(ax2.value(v)) == x[j])
    assert count == space.fiber_size(x, 1, 2)
    assert space.mu_star(cell, 2) == count * lv2.weight_over_sqrt2
    assert lv1.n_star == 4


@settings(max_examples=15)
@given(st.data())
def test_partition_refinement_telescopes(space, data):
    lv = space.level(1)
    x = data.draw(cells_strategy(lv))
    cell = BasicOpenSet(1, x)
    kids = list(space.cells_at(cell, 2))
    for r in space.levels:
        assert exact_mu_sum(space, kids, r) == space.mu_star(cell, r)


@settings(max_examples=15)
@given(st.data())
def test_families_below_point_measure(space, data):
    lv = space.level(1)
    x = data.draw(cells_strategy(lv))
    kids = list(space.cells_at(BasicOpenSet(1, x), 2))
    keep = data.draw(st.lists(st.booleans(), min_size=len(kids), max_size=len(kids)))
    fam = [c for c, b in zip(kids, keep) if b]
    if not fam:
        return
    total = exact_mu_sum(space, fam, 1)
    assert total <= space.point_measure(1)
    assert (total == space.point_measure(1)) == covers_fiber(space, fam, x, 1)


def test_representatives_are_coherent(space3):
    lv = space3.level(1)
    rng = np.random.default_rng(0)
    cell = BasicOpenSet(1, tuple(int(rng.integers(lv.axis(j).lo, lv.axis(j).hi)) for j in range(5)))
    for seed in range(3):
        p = space3.representative(cell, np.random.default_rng(seed))
        assert p.check_coherent() and cell.contains(p)


def _integrand(units, f_v):
    def f(p):
        return (discrete_action(p, f_v) * (1j / units.hbar)).exp()
    return f


def test_riemann_constant_integrand(space):
    lv = space.level(1)
    cells = [BasicOpenSet(1, (0, 1, 2, 3, 0)), BasicOpenSet(1, (1, 1, 2, 3, 0))]
    one = lambda p: SequenceValue.constant(1.0, space.levels)  # noqa: E731
    val = riemann_integral(space, one, cells)
    for r in space.levels:
        assert math.isclose(val[r].real, math.sqrt(2) * float(exact_mu_sum(space, cells, r)))


def test_riemann_independent_of_representatives(space3, units, harmonic):
    cells = [BasicOpenSet(1, (0, 1, -2, 3, 0))]
    f = _integrand(units, harmonic)
    a = riemann_integral(space3, f, cells, level=2, rng=np.random.default_rng(1))
    b = riemann_integral(space3, f, cells, level=2, rng=np.random.default_rng(2))
    assert a[1] == b[1] and a[2] == b[2]


def test_riemann_additive(space, units, harmonic):
    f = _integrand(units, harmonic)
    p0 = [BasicOpenSet(1, (0, 1, 2, 3, 0))]
    p1 = [BasicOpenSet(1, (1, -1, 2, 0, 2))]
    whole = riemann_integral(space, f, p0 + p1)
    parts = riemann_integral(space, f, p0) + riemann_integral(space, f, p1)
    assert np.allclose(whole.entries, parts.entries, rtol=1e-12, atol=1e-15)
    scaled = riemann_integral(space, lambda p: 2 * f(p), p0)
    assert np.allclose(scaled.entries, 2 * riemann_integral(space, f, p0).entries)


def test_path_phase_sum_methods_agree(space, harmonic):
    box = restricted_path_set(space, 0, Fraction(1, 3), 4, 1, strict=False)
    a = path_phase_sum(box, harmonic, "factorized")
    b = path_phase_sum(box, harmonic, "enumerate")
    assert abs(a - b) < 1e-9 * max(1, abs(a))


def test_path_space_identity_free_direct(units):
    sp = PathSpace(LatticeSequence((6,)), DeltaSchedule.constant(1, 2), units)
    for y1 in (0, Fraction(1, 3), Fraction(-1, 2)):
        rec = path_space_estimate(sp, 0, y1, 2, free())[0]
        assert rec.operator_route == "direct"
        assert abs(rec.estimate - rec.operator_side) < 1e-8


def test_path_space_identity_harmonic_lifted(units, harmonic):
    sp = PathSpace(LatticeSequence((6,)), DeltaSchedule.constant(1, 2), units)
    for y1 in (0, Fraction(1, 3), Fraction(-1, 2)):
        rec = path_space_estimate(sp, 0, y1, 2, harmonic, route="lifted")[0]
        assert rec.operator_route == "lifted"
        assert abs(rec.estimate - rec.operator_side) < 1e-8


def test_lifted_and_direct_routes_differ_with_potential(units, harmonic):
    sp = PathSpace(LatticeSequence((6,)), DeltaSchedule.constant(1, 2), units)
    lv = sp.level(1)
    a, _ = operator_side(0, Fraction(1, 3), 2, lv, harmonic, units, "lifted")
    b, _ = operator_side(0, Fraction(1, 3), 2, lv, harmonic, units, "direct")
    assert abs(a - b) > 1e-2


def test_lifted_and_direct_routes_agree_without_potential(units):
    sp = PathSpace(LatticeSequence((6,)), DeltaSchedule.constant(1, 2), units)
    lv = sp.level(1)
    a, _ = operator_side(0, Fraction(1, 3), 2, lv, free(), units, "lifted")
    b, _ = operator_side(0, Fraction(1, 3), 2, lv, free(), units, "direct")
    assert abs(a - b) < 1e-12
