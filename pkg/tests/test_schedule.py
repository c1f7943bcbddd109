import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lfi.kernels import free_kernel_continuum, mehler_kernel
from lfi.potentials import HarmonicPotential, PolynomialPotential, free
from lfi.schedule import (
    PsiEnumeration,
    Quadrature,
    ReferenceUnavailableError,
    ScheduleConfig,
    consequence_bound,
    continuum_trotter_kernel,
    free_gaussian,
    kernel_matrix_element,
    l2_difference,
    mehler_gaussian,
    public_report,
    reference_kernel,
    tau_delta,
)
from lfi.units import make_units


def test_enumeration_order():
    e = PsiEnumeration()
    first = e.first(6)
    assert first[0] == (Fraction(0), 1)
    assert len(set(first)) == 6
    assert PsiEnumeration().first(20) == e.first(20)


def test_gaussian_kernels_match_closed_forms(units, harmonic):
    assert np.isclose(free_gaussian(units, units.t)(0.3, -0.4), free_kernel_continuum(-0.4, 0.3, units))
    w = harmonic.omega(units)
    assert np.isclose(mehler_gaussian(units, w, units.t)(0.3, -0.4), mehler_kernel(-0.4, 0.3, w, units))


@given(st.floats(0.1, 1.0), st.floats(0.1, 1.0))
def test_free_semigroup(t1, t2):
    u = make_units(Fraction(1, 2), 4)
    k = free_gaussian(u, t2).after(free_gaussian(u, t1))
    ref = free_gaussian(u, t1 + t2)
    assert np.isclose(k(0.2, 0.7), ref(0.2, 0.7))


def test_mehler_semigroup(units, harmonic):
    w = harmonic.omega(units)
    k = mehler_gaussian(units, w, 0.4).after(mehler_gaussian(units, w, 0.3))
    assert np.isclose(k(0.5, -0.1), mehler_gaussian(units, w, 0.7)(0.5, -0.1))


def test_continuum_trotter_converges_first_order(units, harmonic):
    ref = reference_kernel(harmonic, units)
    errs = [abs(continuum_trotter_kernel(harmonic, units, n)(0.3, 0.1) - ref(0.3, 0.1)) for n in (16, 64, 256)]
    assert errs[0] > errs[1] > errs[2]
    assert 3 < errs[1] / errs[2] < 5


def test_apply_step_against_quadrature(units):
    from scipy import integrate
    k = free_gaussian(units, units.t)
    x = 0.37
    re = integrate.quad(lambda y: k(x, y).real, -0.5, 0.25)[0]
    im = integrate.quad(lambda y: k(x, y).imag, -0.5, 0.25)[0]
    assert abs(k.apply_step(x, -0.5, 0.25) - complex(re, im)) < 1e-9


def test_l2_difference_zero_for_identical(units):
    k = free_gaussian(units, units.t)
    assert l2_difference(k, k, 0, 1, Quadrature()) == (0.0, 0.0)


def test_unitary_kernel_preserves_norm(units):
    k = free_gaussian(units, units.t)
    zero = free_gaussian(units, 1e3)  # spreads the window to almost nothing
    n, budget = l2_difference(k, zero, 0, 1, Quadrature())
    assert abs(n - math.sqrt(2)) < 0.05 + budget


def test_reference_rejects_quartic(units):
    with pytest.raises(ReferenceUnavailableError):
        reference_kernel(PolynomialPotential((0, 0, 0, 0, 1)), units)


def test_free_level_one_report(units):
    cfg = ScheduleConfig(units, free(), [6, 12])
    tau, dk, rep = tau_delta(1, cfg)
    assert 1 <= tau <= dk <= 1
    cand = public_report(rep)["candidates"]
    assert cand and all({"cond_i", "cond_ii", "s", "s_prime"} <= set(c) for c in cand)


def test_no_qualifier_falls_back(units):
    h = HarmonicPotential(omega_t=Fraction(31, 10), units=units)
    tau, dk, rep = tau_delta(1, ScheduleConfig(units, h, [6, 12]))
    assert (tau, dk) == (1, 1) and rep["fallback"]


def test_witness_bounds_and_consequence(units):
    cfg = ScheduleConfig(units, free(), [6, 12, 24])
    out = tau_delta(2, cfg)
    tau, dk, _ = out
    assert tau <= dk <= 2
    assert consequence_bound(0, tau, 2, out)["holds"]
    with pytest.raises(ValueError):
        consequence_bound(tau + 1, 0, 2, out)


def test_tau_delta_deterministic(units):
    import json
    cfg = ScheduleConfig(units, free(), [6, 12])
    a = json.dumps(public_report(tau_delta(1, cfg)[2]), sort_keys=True)
    b = json.dumps(public_report(tau_delta(1, cfg)[2]), sort_keys=True)
    assert a == b


def test_matrix_element_of_free_kernel_is_bounded(units):
    k = free_gaussian(units, units.t)
    val = kernel_matrix_element(k, 0, 1, 0, 1)
    assert abs(val) <= 2 + 1e-9
