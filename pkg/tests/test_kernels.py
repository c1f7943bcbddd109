import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lfi.kernels import (
    CausticError,
    EmptyWindowError,
    extract_propagator_window,
    free_kernel_continuum,
    free_kernel_lattice,
    free_kernel_lattice_matrix,
    free_propagator_direct,
    free_window_average,
    mehler_kernel,
    window_average,
)
from lfi.lattice import Grid, window_indices
from lfi.operators import EvolutionFactor, apply_kinetic, dense_matrix, exact_evolution_oracle


def test_continuum_kernel_diagonal(units):
    assert np.isclose(free_kernel_continuum(0, 0, units), np.sqrt(units.m / (2j * math.pi * units.hbar * units.t)))


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_continuum_kernel_modulus(units, x0, x1):
    assert math.isclose(abs(free_kernel_continuum(x0, x1, units)), math.sqrt(0.5))


def test_continuum_kernel_symmetry(units):
    z = free_kernel_continuum(0, 1, units) * np.conj(free_kernel_continuum(0, -1, units))
    assert math.isclose(abs(z), units.m / (2 * math.pi * units.hbar * units.t))


def test_lattice_closed_form_examples(units):
    g = Grid(6)
    v = free_kernel_lattice(0, Fraction(1, 3), g, units)
    assert np.isclose(v.value, 2 / 6 * free_kernel_continuum(0, Fraction(1, 3), units))
    odd = free_kernel_lattice(0, Fraction(1, 6), g, units)
    assert odd.spiked_zero and odd.value == 0


@pytest.mark.parametrize("sq", [6, 12])
def test_lattice_closed_form_equals_dense_dft(units, sq):
    g = Grid(sq)
    dense = dense_matrix(EvolutionFactor("kinetic", g, units))
    assert np.abs(dense - free_kernel_lattice_matrix(g, units)).max() < 1e-9


def test_lattice_closed_form_on_refined_grid(units):
    g = Grid.refined(6, 1)
    dense = dense_matrix(EvolutionFactor("kinetic", g, units))
    assert np.abs(dense - free_kernel_lattice_matrix(g, units)).max() < 1e-9


def test_mehler_reduces_to_free_for_small_omega(units):
    assert abs(mehler_kernel(0.2, 0.7, 1e-6, units) - free_kernel_continuum(0.2, 0.7, units)) < 1e-6
    with pytest.raises(CausticError):
        mehler_kernel(0, 0, math.pi / units.t, units)


def test_mehler_matches_lattice_oracle(units, harmonic):
    # fine lattice, smooth window: the exact lattice evolution approaches Mehler
    g = Grid(24)
    w = harmonic.omega(units)
    val = extract_propagator_window(0, Fraction(1, 2), 4,
                                    lambda a: exact_evolution_oracle(a, 1, harmonic, g, units), g)
    ref = window_average(lambda x0, x1: mehler_kernel(x0, x1, w, units), 0, Fraction(1, 2), 4)
    assert abs(val - ref) / abs(ref) < 0.05


def test_identity_window_counts(units):
    g = Grid(30)
    y, p = Fraction(1, 5), 4
    val = extract_propagator_window(y, y, p, lambda a: a, g, normalization="literal")
    count = len(window_indices(g, y, p))
    assert np.isclose(val, p * p / (4 * g.sqrt_n) * g.n**-0.5 * count)


def test_disjoint_windows_vanish_under_identity():
    g = Grid(12)
    assert extract_propagator_window(-2, 2, 4, lambda a: a, g) == 0
    with pytest.raises(EmptyWindowError):
        extract_propagator_window(0, 50, 4, lambda a: a, g)


def test_free_window_average_agrees_with_double_quadrature(units):
    one = free_window_average(0, Fraction(1, 2), 4, units)
    two = window_average(lambda a, b: free_kernel_continuum(a, b, units), 0, Fraction(1, 2), 4)
    assert abs(one - two) < 1e-8


def test_window_extraction_free_y1_equal_one(units):
    g = Grid(900)
    val = extract_propagator_window(0, 1, 8, lambda a: apply_kinetic(a, 1, g, units), g)
    ref = free_kernel_continuum(0, 1, units)
    assert abs(val - ref) / abs(ref) < 0.02


def test_window_extraction_tracks_window_average(units):
    g = Grid(900)
    val = extract_propagator_window(0, 1, 8, lambda a: apply_kinetic(a, 1, g, units), g)
    ref = free_window_average(0, 1, 8, units)
    assert abs(val - ref) / abs(ref) < 2e-3


def test_direct_free_propagator(units):
    ref = free_kernel_continuum(0, 1, units)
    for sq in (6, 12, 30):
        v = free_propagator_direct(0, 1, Grid(sq), units)
        assert not v.spiked_zero and abs(v.value - ref) < 1e-9
    assert free_propagator_direct(0, Fraction(1, 6), Grid(6), units).spiked_zero
