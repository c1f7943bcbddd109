"""Potentials f_v with an optional exact rational phase.

A potential multiplies ``|x>`` by ``exp(-i tau f_v(x) / hbar)``. When
``f_v(x) = P(x) / pi`` for a rational polynomial P, the exponent divided by
pi is rational on every rational grid point, which is what the exact phase
arithmetic needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .units import UnitSystem


class PotentialSpecError(ValueError):
    pass


class Potential:
    """Real-valued f_v; subclasses override ``__call__``."""

    name = "generic"
    exact = False

    def __call__(self, x):
        raise NotImplementedError

    def phase_over_pi(self, x: Fraction, frac: Fraction, units: UnitSystem) -> Fraction:
        """Exponent of ``exp(-i frac t f_v(x) / hbar)`` divided by ``-pi``."""
        raise NotImplementedError(f"{self.name} potential has no exact phase")

    @property
    def is_free(self) -> bool:
        return False

    def to_config(self) -> dict:
        return {"kind": self.name}


@dataclass(frozen=True)
class PolynomialPotential(Potential):
    """f_v(x) = sum_i c_i x**i, divided by pi when ``over_pi`` is set."""

    coeffs: tuple = ()
    over_pi: bool = False

    name = "poly"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(str(c)) if isinstance(c, float) else Fraction(c)
                                                 for c in self.coeffs))

    @property
    def exact(self) -> bool:
        return self.over_pi

    @property
    def is_free(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __call__(self, x):
        c = [float(v) for v in self.coeffs]
        x = np.asarray(x, dtype=float)
        out = np.polynomial.polynomial.polyval(x, c) if c else np.zeros_like(x)
        if self.over_pi:
            out = out / math.pi
        return out if np.ndim(out) else float(out)

    def exact_value(self, x: Fraction) -> Fraction:
        """P(x), i.e. f_v(x) times pi when ``over_pi`` is set."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def phase_over_pi(self, x: Fraction, frac: Fraction, units: UnitSystem) -> Fraction:
        # t f_v / hbar = pi t_over_pi * (P/pi) * 2 pi / h = pi * 2 t_over_pi P / h
        if not self.over_pi:
            if self.is_free:
                return Fraction(0)
            raise NotImplementedError("exact phase needs a potential of the form P(x)/pi")
        return frac * 2 * units.t_over_pi * self.exact_value(Fraction(x)) / units.h

    def to_config(self) -> dict:
        return {"kind": "poly", "coeffs": [str(c) for c in self.coeffs], "over_pi": self.over_pi}


def free() -> PolynomialPotential:
    return PolynomialPotential((), over_pi=True)


class HarmonicPotential(PolynomialPotential):
    """f_v(x) = q x**2 / 2 with ``q = m omega**2``."""

    name = "harmonic"

    def __init__(self, spring=None, omega_t=None, units: UnitSystem | None = None):
        if (spring is None) == (omega_t is None):
            raise PotentialSpecError("give exactly one of spring or omega_t")
        if omega_t is not None:
            if units is None:
                raise PotentialSpecError("omega_t needs a unit system")
            a = Fraction(str(omega_t)) if isinstance(omega_t, float) else Fraction(omega_t)
            # q = m omega^2 = (pi m_over_pi) (a / (pi t_over_pi))^2 = P / pi
            q_over = units.m_over_pi * a**2 / units.t_over_pi**2
            super().__init__((0, 0, q_over / 2), over_pi=True)
            object.__setattr__(self, "omega_t", a)
            object.__setattr__(self, "_units", units)
        else:
            q = float(spring)
            if q < 0:
                raise PotentialSpecError("spring constant must be non-negative")
            super().__init__((0, 0, Fraction(q).limit_denominator(10**12) / 2), over_pi=False)
            object.__setattr__(self, "omega_t", None)
            object.__setattr__(self, "_units", units)

    @property
    def spring(self) -> float:
        c = float(self.coeffs[2]) * 2
        return c / math.pi if self.over_pi else c

    def omega(self, units: UnitSystem) -> float:
        return math.sqrt(self.spring / units.m)

    def to_config(self) -> dict:
        if self.omega_t is not None:
            return {"kind": "harmonic", "omega_t": str(self.omega_t)}
        return {"kind": "harmonic", "spring": self.spring}


def potential_from_config(spec: Mapping | str | Sequence, units: UnitSystem) -> Potential:
    """Parse ``"free"``, ``{"kind": "harmonic", "spring"|"omega_t": ...}`` or
    ``{"kind": "poly", "coeffs": [...], "over_pi": bool}``."""
    if spec == "free" or spec == ["free"] or spec == {"kind": "free"}:
        return free()
    if not isinstance(spec, Mapping) or "kind" not in spec:
        raise PotentialSpecError(f"bad potential spec {spec!r}")
    kind = spec["kind"]
    extra = set(spec) - {"kind", "spring", "omega_t", "coeffs", "over_pi"}
    if extra:
        raise PotentialSpecError(f"unknown potential keys {sorted(extra)}")
    if kind == "harmonic":
        if "omega_t" in spec:
            return HarmonicPotential(omega_t=Fraction(str(spec["omega_t"])), units=units)
        if "spring" in spec:
            return HarmonicPotential(spring=spec["spring"], units=units)
        raise PotentialSpecError("harmonic potential needs spring or omega_t")
    if kind == "poly":
        return PolynomialPotential(tuple(Fraction(str(c)) for c in spec.get("coeffs", ())),
                                   over_pi=bool(spec.get("over_pi", False)))
    raise PotentialSpecError(f"unknown potential kind {kind!r}")
