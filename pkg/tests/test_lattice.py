from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lfi.lattice import (
    EvenSubgrid,
    Grid,
    OffGridError,
    gk_index,
    grid_value,
    window,
    window_offsets,
)


def test_grid_values():
    g = Grid(6)
    assert grid_value(g, 0) == 0
    assert grid_value(g, 17) == Fraction(17, 6)
    assert grid_value(g, 35) == Fraction(-1, 6)


def test_index_of_roundtrip_and_off_grid():
    g = Grid(6)
    assert g.index_of(Fraction(-1, 6)) == 35
    with pytest.raises(OffGridError):
        g.index_of(Fraction(1, 7))


@given(st.sampled_from([2, 4, 6, 12]), st.data())
def test_index_value_roundtrip(sq, data):
    g = Grid(sq)
    i = data.draw(st.integers(0, g.n - 1))
    assert g.index_of(g.value(i)) == i


def test_gk_index():
    assert gk_index(0, 1) == 0
    assert gk_index(3, 1) == 12  # 2**(2 delta) n
    assert gk_index(3, 2) == 48


@given(st.integers(0, 35), st.integers(1, 2))
def test_gk_preserves_coarse_values(idx, delta):
    coarse = Grid(6)
    fine = Grid.refined(6, delta)
    assert fine.value(gk_index(idx, delta)) == coarse.value(idx)


def test_windows():
    g = Grid(6)
    assert window(g, 0, 3) == [Fraction(j, 6) for j in (-2, -1, 0, 1)]
    assert window(g, 0, 7) == [Fraction(0)]
    assert window(g, 10, 2) == []
    assert window_offsets(g, 10, 2) == (0, 0)


@given(st.fractions(min_value=-2, max_value=2, max_denominator=12), st.integers(1, 9))
def test_window_matches_enumeration(y, p):
    g = Grid(6)
    expected = [g.value(i) for i in range(g.n) if y - Fraction(1, p) <= g.value(i) < y + Fraction(1, p)]
    assert window(g, y, p) == sorted(expected)


def test_even_subgrid():
    g = Grid(12)
    e = EvenSubgrid(g)
    assert len(e) == g.n // 2
    assert e.contains(Fraction(2, 12)) and not e.contains(Fraction(1, 12))


def test_refined_grid_spacing():
    g = Grid.refined(6, 1)
    assert g.sqrt_n == 12 and g.delta == 1
    assert g.spacing == Fraction(1, 24)
    assert g.n * g.spacing == 6
