"""Position grids, the even sublattice, the G_k index map and windows."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .units import DeltaSchedule, LatticeSpec, nk, sqrt_nk


class GridIndexError(IndexError):
    pass


class OffGridError(ValueError):
    pass


def _floor_div(x, step: Fraction) -> int:
    """floor(x / step); exact for rationals, snapped for floats near a node."""
    if isinstance(x, (int, Fraction)):
        q = Fraction(x) / step
        return q.numerator // q.denominator
    q = float(x) / float(step)
    r = round(q)
    return int(r) if abs(q - r) < 1e-9 else int(np.floor(q))


@dataclass(frozen=True)
class Grid:
    """Eigenvalues of Q_N on an N-point lattice.

    Index ``n`` has value ``unit_scale * n / sqrt_n`` for ``n < N/2`` and
    ``unit_scale * (n - N) / sqrt_n`` otherwise.

    Parameters
    ----------
    sqrt_n : int
        Square root of the dimension.
    unit_scale : Fraction
        1 for the natural units of the grid; ``2**-delta`` to express a
        refined grid in the units of the coarse one.
    """

    sqrt_n: int
    unit_scale: Fraction = Fraction(1)

    def __post_init__(self):
        LatticeSpec(self.sqrt_n)
        object.__setattr__(self, "unit_scale", Fraction(self.unit_scale))

    @classmethod
    def refined(cls, sqrt_n_k: int, delta_k: int, original_units: bool = True) -> "Grid":
        """The grid X^d with ``sqrt(N^d) = 2**delta_k * sqrt_n_k``."""
        scale = Fraction(1, 2**delta_k) if original_units else Fraction(1)
        return cls(sqrt_n_k * 2**delta_k, scale)

    @classmethod
    def for_level(cls, k: int, delta: DeltaSchedule | None = None, original_units: bool = True):
        if delta is None:
            return cls(sqrt_nk(k))
        return cls.refined(sqrt_nk(k), delta(k), original_units)

    @property
    def n(self) -> int:
        return self.sqrt_n**2

    @property
    def delta(self) -> int:
        """delta with ``unit_scale == 2**-delta``; 0 for an unscaled grid."""
        inv = 1 / self.unit_scale
        if inv.denominator != 1 or inv.numerator & (inv.numerator - 1):
            raise ValueError(f"unit_scale {self.unit_scale} is not a power of 1/2")
        return inv.numerator.bit_length() - 1

    @property
    def coarse_sqrt_n(self) -> int:
        """sqrt(N_k) of the coarse lattice this grid refines."""
        return self.sqrt_n >> self.delta

    @property
    def spacing(self) -> Fraction:
        return self.unit_scale / self.sqrt_n

    @property
    def lower(self) -> Fraction:
        return -self.unit_scale * Fraction(self.sqrt_n, 2)

    @property
    def upper(self) -> Fraction:
        """Exclusive upper edge."""
        return self.unit_scale * Fraction(self.sqrt_n, 2)

    def wrapped(self, idx=None) -> np.ndarray:
        """Signed integer offsets ``n`` or ``n - N`` for the given indices."""
        n = self.n
        idx = np.arange(n, dtype=np.int64) if idx is None else np.asarray(idx, dtype=np.int64)
        return np.where(idx < n // 2, idx, idx - n)

    def values(self) -> np.ndarray:
        """Float eigenvalues in index order."""
        return self.wrapped() * float(self.spacing)

    def value(self, idx: int) -> Fraction:
        return grid_value(self, idx)

    def index_of(self, x) -> int:
        """Index of an on-grid value; raises OffGridError otherwise."""
        q = Fraction(x) / self.spacing
        if q.denominator != 1:
            raise OffGridError(f"{x} is not a multiple of the spacing {self.spacing}")
        j = q.numerator
        half = self.n // 2
        if not -half <= j < half:
            raise OffGridError(f"{x} outside [{self.lower}, {self.upper})")
        return j % self.n

    def contains(self, x) -> bool:
        try:
            self.index_of(x)
        except OffGridError:
            return False
        return True

    def sorted_offsets(self) -> np.ndarray:
        half = self.n // 2
        return np.arange(-half, half, dtype=np.int64)

    def floor_offset(self, x: float) -> int:
        """Offset of the largest grid value <= x, or the minimum if none is."""
        half = self.n // 2
        j = _floor_div(x, self.spacing)
        return min(max(j, -half), half - 1)

    def floor_value(self, x: float) -> Fraction:
        return self.floor_offset(x) * self.spacing


def grid_value(g: Grid, idx: int) -> Fraction:
    """Eigenvalue of basis vector ``idx``.

    >>> grid_value(Grid(6), 35)
    Fraction(-1, 6)
    """
    if not 0 <= idx < g.n:
        raise GridIndexError(f"index {idx} outside 0..{g.n - 1}")
    j = idx if idx < g.n // 2 else idx - g.n
    return j * g.spacing


@dataclass(frozen=True)
class EvenSubgrid:
    """Points x of the parent grid for which x/2 is also on the grid.

    Under the wraparound rule these are exactly the even indices.
    """

    parent: Grid

    def contains(self, x) -> bool:
        return self.parent.contains(x) and self.parent.contains(Fraction(x) / 2)

    def indices(self) -> np.ndarray:
        return np.arange(0, self.parent.n, 2, dtype=np.int64)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.n, dtype=bool)
        m[::2] = True
        return m

    def sorted_offsets(self) -> np.ndarray:
        half = self.parent.n // 2
        return np.arange(-half, half, 2, dtype=np.int64)

    def __len__(self) -> int:
        return self.parent.n // 2

    @property
    def spacing(self) -> Fraction:
        return 2 * self.parent.spacing

    def floor_offset(self, x: float) -> int:
        """Parent offset of the largest member <= x (minimum member if none)."""
        half = self.parent.n // 2
        j = _floor_div(x, self.spacing)
        return 2 * min(max(j, -half // 2), half // 2 - 1)


def gk_index(idx: int, delta_k: int) -> int:
    """Index of the image of ``u(idx)`` under G_k: ``4**delta_k * idx``.

    Wrapped indices stay wrapped: the image of an index above N/2 lands above
    N^d/2, so the value in coarse units is preserved.
    """
    if idx < 0:
        raise GridIndexError(f"negative index {idx}")
    return 4**delta_k * idx


def gk_indices(n_k: int, delta_k: int) -> np.ndarray:
    return 4**delta_k * np.arange(n_k, dtype=np.int64)


def window(g: Grid, y, p: int) -> list[Fraction]:
    """Grid values x with ``y - 1/p <= x < y + 1/p``, ascending.

    >>> [str(v) for v in window(Grid(6), 0, 3)]
    ['-1/3', '-1/6', '0', '1/6']
    """
    lo, hi = window_offsets(g, y, p)
    return [j * g.spacing for j in range(lo, hi)]


def window_offsets(g: Grid, y, p: int) -> tuple[int, int]:
    """Half-open range ``[lo, hi)`` of signed offsets inside the window."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    y = Fraction(y)
    half = g.n // 2
    s = g.spacing
    a = (y - Fraction(1, p)) / s
    b = (y + Fraction(1, p)) / s
    lo = -((-a.numerator) // a.denominator)  # ceil
    hi = -((-b.numerator) // b.denominator)  # first offset not < b
    lo, hi = max(lo, -half), min(hi, half)
    return (lo, hi) if lo < hi else (0, 0)


def window_indices(g: Grid, y, p: int) -> np.ndarray:
    lo, hi = window_offsets(g, y, p)
    return np.arange(lo, hi, dtype=np.int64) % g.n


def level_grid(k: int) -> Grid:
    return Grid(sqrt_nk(k))


def level_dimension(k: int) -> int:
    return nk(k)
