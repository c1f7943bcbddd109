from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lfi.kernels import free_kernel_continuum
from lfi.lattice import Grid
from lfi.operators import (
    EvolutionFactor,
    ResourceCapError,
    apply_kinetic,
    apply_potential,
    dense_matrix,
    exact_evolution_oracle,
    gk_conjugation_error,
    kinetic_phases,
    lifted_trotter,
    potential_phases,
    trotter_power,
    unitarity_defect,
)
from lfi.potentials import PolynomialPotential, free


def random_state(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def test_kinetic_is_diagonal_in_fourier_basis(units):
    g = Grid(6)
    col = np.exp(2j * np.pi * np.arange(g.n) * 5 / g.n) / 6
    out = apply_kinetic(col, Fraction(1, 3), g, units)
    ratio = out / col
    assert np.allclose(ratio, ratio[0]) and np.isclose(abs(ratio[0]), 1)


@given(st.integers(0, 10**6), st.fractions(min_value=0, max_value=5, max_denominator=16))
def test_kinetic_unitary(seed, frac):
    g = Grid(6)
    psi = random_state(g.n, seed)
    out = apply_kinetic(psi, frac, g)
    assert np.isclose(np.linalg.norm(out), np.linalg.norm(psi))


def test_kinetic_entry_index_gap_two(units):
    g = Grid(6)
    col = np.zeros(g.n, complex)
    col[0] = 1
    out = apply_kinetic(col, 1, g, units)
    expected = 2 * g.n**-0.5 * free_kernel_continuum(0, Fraction(1, 3), units)
    assert abs(out[2] - expected) < 1e-12


def test_kinetic_phases_exact_period(units):
    g = Grid(6)
    # frac * h-scale * m**2 / N integer for frac = N: phases are all one
    assert np.allclose(kinetic_phases(g, g.n), 1)


def test_potential_examples(units):
    g = Grid(6)
    psi = random_state(g.n)
    assert np.allclose(apply_potential(psi, 1, free(), g, units), psi)
    c = Fraction(3, 7)
    out = apply_potential(psi, Fraction(1, 2), PolynomialPotential((c,)), g, units)
    assert np.allclose(out, psi * np.exp(-1j * 0.5 * units.t * float(c) / units.hbar))


def test_scaled_potential_equals_halved_point(units, harmonic):
    gd = Grid.refined(6, 1)
    scaled = potential_phases(gd, Fraction(1, 4), harmonic, units, scaled=True)
    x_coarse = gd.wrapped() / gd.sqrt_n / 2
    direct = np.exp(-1j * 0.25 * units.t * harmonic(x_coarse) / units.hbar)
    assert np.allclose(scaled, direct)


def test_trotter_power_definitions(units, harmonic):
    g = Grid.refined(6, 1)
    psi = random_state(g.n)
    with pytest.raises(ValueError):
        trotter_power(psi, 0, 1, harmonic, g, units)
    one = trotter_power(psi, 1, 1, harmonic, g, units)
    manual = apply_kinetic(apply_potential(psi, Fraction(1, 4), harmonic, g, units), Fraction(1, 4), g, units)
    assert np.allclose(one, manual)
    assert np.allclose(trotter_power(psi, 4, 1, free(), g, units), apply_kinetic(psi, 1, g, units))


def test_trotter_unitary(units, harmonic):
    g = Grid(12)
    psi = random_state(g.n, 3)
    assert unitarity_defect(lambda a: trotter_power(a, 16, 2, harmonic, g, units), psi) < 1e-10


def test_trotter_converges_to_exact_evolution(units, harmonic):
    g = Grid(6)
    psi = random_state(g.n, 1)
    ref = exact_evolution_oracle(psi, 1, harmonic, g, units, scaled=False)
    errs = [np.linalg.norm(trotter_power(psi, 4**d, d, harmonic, g, units, scaled=False) - ref)
            for d in (1, 2, 3)]
    assert errs[0] > errs[1] > errs[2]
    # first order in dt: each refinement divides the error by about 4
    assert errs[1] / errs[2] > 3


def test_dense_matrix_and_cap(units, monkeypatch):
    g = Grid(6)
    mat = dense_matrix(EvolutionFactor("kinetic", g, units))
    assert np.allclose(mat.conj().T @ mat, np.eye(g.n))
    monkeypatch.setenv("LFI_DENSE_CAP", "10")
    with pytest.raises(ResourceCapError):
        dense_matrix(EvolutionFactor("kinetic", g, units))


@pytest.mark.parametrize("n", [1, 2])
def test_gk_conjugation_small_splits(units, harmonic, n):
    out = gk_conjugation_error(6, 1, n, harmonic, units)
    assert out["max_entry_error"] < 1e-9


def test_lifted_trotter_free_matches_coarse(units):
    g = Grid(6)
    psi = random_state(g.n, 2)
    assert np.allclose(lifted_trotter(psi, 1, free(), 6, units), apply_kinetic(psi, 1, g, units))
