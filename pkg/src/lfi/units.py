"""Scaled physical constants, the N_k lattice sequence and delta schedules.

All unit-level quantities are exact rationals. The time ``t`` and the mass
``m`` carry a factor of pi, which is stored symbolically: only the rational
coefficient is kept, and floats appear when a transcendental function has to
be evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count
from typing import Iterable, Mapping, Sequence


class InvalidUnitsError(ValueError):
    pass


class InvalidScheduleError(ValueError):
    pass


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(value)


@dataclass(frozen=True)
class UnitSystem:
    """Constants with ``t*h/(2*m) == 1``.

    ``t = pi * t_over_pi`` and ``m = pi * m_over_pi``; ``hbar = h / (2 pi)``
    so ``pi * hbar = h / 2`` is rational as well.
    """

    t_over_pi: Fraction
    h: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t_over_pi", _as_fraction(self.t_over_pi))
        object.__setattr__(self, "h", _as_fraction(self.h))
        if self.t_over_pi <= 0 or self.h <= 0:
            raise InvalidUnitsError(
                f"t and h must be positive, got t/pi={self.t_over_pi}, h={self.h}")

    @property
    def m_over_pi(self) -> Fraction:
        return self.t_over_pi * self.h / 2

    @property
    def th_over_pi(self) -> Fraction:
        return self.t_over_pi * self.h

    @property
    def th_over_m(self) -> Fraction:
        return (self.t_over_pi * self.h) / self.m_over_pi

    @property
    def hbar_times_pi(self) -> Fraction:
        return self.h / 2

    @property
    def t(self) -> float:
        return math.pi * float(self.t_over_pi)

    @property
    def m(self) -> float:
        return math.pi * float(self.m_over_pi)

    @property
    def hbar(self) -> float:
        return float(self.h) / (2 * math.pi)

    def step_units(self, n_steps: int) -> "UnitSystem":
        """Units of the refined space used for one step of length t/n_steps.

        The refined space uses ``n_steps * h`` as Planck's constant, so the
        mass and the relation ``dt * h_d / m == 2`` are unchanged.
        """
        return UnitSystem(self.t_over_pi / n_steps, self.h * n_steps)


def make_units(t_over_pi, h) -> UnitSystem:
    """Build the unit system with ``m = t*h/2``.

    >>> u = make_units(Fraction(1, 2), 4)
    >>> u.th_over_m
    Fraction(2, 1)
    """
    return UnitSystem(_as_fraction(t_over_pi), _as_fraction(h))


def primes() -> Iterable[int]:
    found: list[int] = []
    for n in count(2):
        if all(n % p for p in found if p * p <= n):
            found.append(n)
            yield n


def first_primes(n: int) -> list[int]:
    out = []
    for p in primes():
        if len(out) == n:
            break
        out.append(p)
    return out


def sqrt_nk(k: int) -> int:
    if k < 1:
        raise ValueError(f"N_k is only used for k >= 1, got k={k}")
    return math.prod(p**k for p in first_primes(k + 1))


def nk(k: int) -> int:
    """Product of the first k+1 primes, each raised to the power 2k."""
    return sqrt_nk(k) ** 2


@dataclass(frozen=True)
class LatticeSpec:
    sqrt_n: int
    required_divisors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.sqrt_n < 1:
            raise ValueError("sqrt_n must be positive")
        if self.sqrt_n % 2:
            raise ValueError(f"sqrt(N)={self.sqrt_n} must be even since th/m = 2")
        for d in self.required_divisors:
            if self.sqrt_n % d:
                raise ValueError(f"{d} does not divide sqrt(N)={self.sqrt_n}")

    @property
    def n(self) -> int:
        return self.sqrt_n**2


@dataclass(frozen=True)
class DeltaSchedule:
    """delta(k) for ``0 <= k < k_max``; either constant or an explicit table."""

    values: tuple[int, ...]
    kind: str = "explicit"

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values:
            raise InvalidScheduleError("empty delta schedule")
        if min(self.values) < 1:
            raise InvalidScheduleError(f"delta(k) must be >= 1, got {self.values}")

    @classmethod
    def constant(cls, s: int, k_max: int) -> "DeltaSchedule":
        return cls((s,) * k_max, kind="constant")

    @classmethod
    def table(cls, values: Sequence[int]) -> "DeltaSchedule":
        return cls(tuple(values), kind="explicit")

    @property
    def k_max(self) -> int:
        return len(self.values)

    def __call__(self, k: int) -> int:
        if not 0 <= k < self.k_max:
            raise IndexError(f"k={k} outside schedule of length {self.k_max}")
        return self.values[k]

    def n_star(self, k: int) -> int:
        return 4 ** self(k)

    def dt_over_t(self, k: int) -> Fraction:
        return Fraction(1, self.n_star(k))

    def is_good(self, k: int) -> bool:
        return is_delta_good(k, self)

    def good_levels(self, start: int = 1) -> list[int]:
        return [k for k in range(start, self.k_max) if self.is_good(k)]


def is_delta_good(k: int, delta: DeltaSchedule) -> bool:
    dk = delta(k)
    return all(delta(p) <= dk for p in range(k))


def scaled_n(k: int, delta: DeltaSchedule, units: UnitSystem | None = None):
    """Return ``(N^d_k, h_d)``; ``h_d`` is None without a unit system."""
    factor = 4 ** delta(k)
    n_d = factor * nk(k)
    h_d = None if units is None else factor * units.h
    return n_d, h_d


@dataclass(frozen=True)
class LatticeSequence:
    """sqrt(N_k) for the levels ``k = 1 .. k_max-1`` (level 0 is unused)."""

    sqrt_ns: tuple[int, ...]
    name: str = "explicit"
    _lookup: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sqrt_ns", tuple(int(s) for s in self.sqrt_ns))
        for s in self.sqrt_ns:
            LatticeSpec(s)
        object.__setattr__(self, "_lookup", {k + 1: s for k, s in enumerate(self.sqrt_ns)})

    @classmethod
    def nk_sequence(cls, k_max: int) -> "LatticeSequence":
        return cls(tuple(sqrt_nk(k) for k in range(1, k_max)), name="nk_sequence")

    @classmethod
    def surrogate(cls, base: int, k_max: int, ratio: int = 2) -> "LatticeSequence":
        return cls(tuple(base * ratio ** (k - 1) for k in range(1, k_max)), name="surrogate")

    @property
    def k_max(self) -> int:
        return len(self.sqrt_ns) + 1

    @property
    def levels(self) -> range:
        return range(1, self.k_max)

    def sqrt_n(self, k: int) -> int:
        try:
            return self._lookup[k]
        except KeyError:
            raise IndexError(f"level {k} not in lattice sequence {self.sqrt_ns}") from None

    def n(self, k: int) -> int:
        return self.sqrt_n(k) ** 2


def refinement_side_condition(delta: DeltaSchedule, k_max: int | None = None) -> list[float]:
    """n*(delta,k) * N_k^-2 for k = 1..k_max-1 (should tend to zero)."""
    k_max = delta.k_max if k_max is None else k_max
    return [delta.n_star(k) / float(nk(k)) ** 2 for k in range(1, k_max)]


def units_from_config(cfg: Mapping) -> UnitSystem:
    try:
        return make_units(Fraction(str(cfg["t_over_pi"])), Fraction(str(cfg["h"])))
    except KeyError as exc:
        raise InvalidUnitsError(f"missing key {exc}") from None


def schedule_from_config(spec: Mapping, k_max: int) -> DeltaSchedule:
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise InvalidScheduleError(f"delta must be {{'constant': s}} or {{'table': [...]}}, got {spec!r}")
    if "constant" in spec:
        return DeltaSchedule.constant(int(spec["constant"]), k_max)
    if "table" in spec:
        values = list(spec["table"])
        if len(values) < k_max:
            raise InvalidScheduleError(f"delta table has {len(values)} entries, need {k_max}")
        return DeltaSchedule.table(values[:k_max])
    raise InvalidScheduleError(f"unknown delta kind {list(spec)}")
