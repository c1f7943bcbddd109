from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from lfi.potentials import HarmonicPotential, free
from lfi.units import make_units

settings.register_profile("lfi", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lfi")


@pytest.fixture(scope="session")
def units():
    return make_units(Fraction(1, 2), 4)


@pytest.fixture(scope="session")
def harmonic(units):
    return HarmonicPotential(omega_t=Fraction(1, 2), units=units)


@pytest.fixture(scope="session")
def free_potential():
    return free()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
