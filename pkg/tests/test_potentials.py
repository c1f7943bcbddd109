from fractions import Fraction

import math
import pytest
from hypothesis import given, strategies as st

from lfi.potentials import HarmonicPotential, PolynomialPotential, PotentialSpecError, free, potential_from_config


def test_free():
    assert free().is_free and free()(3.0) == 0


def test_harmonic_frequency(units):
    h = HarmonicPotential(omega_t=Fraction(1, 2), units=units)
    assert math.isclose(h.omega(units) * units.t, 0.5)
    assert math.isclose(h(1.0), units.m * h.omega(units) ** 2 / 2)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=24))
def test_exact_phase_matches_float(x):
    from lfi.units import make_units
    u = make_units(Fraction(1, 2), 4)
    h = HarmonicPotential(omega_t=Fraction(1, 2), units=u)
    q = h.phase_over_pi(x, Fraction(1, 4), u)
    assert math.isclose(float(q) * math.pi, 0.25 * u.t * h(float(x)) / u.hbar, abs_tol=1e-12)


def test_config_parsing(units):
    assert potential_from_config("free", units).is_free
    assert isinstance(potential_from_config({"kind": "harmonic", "omega_t": "1/2"}, units), HarmonicPotential)
    p = potential_from_config({"kind": "poly", "coeffs": [0, 1]}, units)
    assert isinstance(p, PolynomialPotential) and p(2.0) == 2
    with pytest.raises(PotentialSpecError):
        potential_from_config({"kind": "harmonic", "omega_t": 1, "colour": 2}, units)
    with pytest.raises(PotentialSpecError):
        potential_from_config({"kind": "quartic"}, units)
