"""Multi-level path samplings, the set function mu*, Riemann sums and the
path-space estimator of the propagator.

Level k samples a path at the times ``j t / n*(k)``, ``n*(k) = 4**delta(k)``.
The two endpoints are floored onto X_k (spacing ``1/sqrt(N_k)``), interior
points onto the even sublattice X^2d_k, which in coarse units has spacing
``2 / (n* sqrt(N_k))`` and covers ``[-sqrt(N_k)/2, sqrt(N_k)/2)``.
A level-k tuple is stored as integer offsets on those two grids.

Sequence values (elements of C^omega truncated at K_max) are indexed by the
level, starting at 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from scipy import integrate

from . import exact
from .hilbert import embed_step
from .lattice import Grid, window_offsets
from .operators import lifted_trotter, trotter_power
from .potentials import Potential
from .units import DeltaSchedule, LatticeSequence, UnitSystem, is_delta_good

SQRT2 = math.sqrt(2)


class LevelTooSmallError(ValueError):
    pass


class NotDeltaGoodError(ValueError):
    pass


# ---------------------------------------------------------------------------
# sequence values


@dataclass(frozen=True, eq=False)
class SequenceValue:
    """Values at levels ``offset, offset+1, ...``, combined entrywise."""

    entries: np.ndarray
    offset: int = 1

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=np.complex128))

    @classmethod
    def constant(cls, c, levels: Iterable[int]) -> "SequenceValue":
        levels = list(levels)
        return cls(np.full(len(levels), c, dtype=np.complex128), levels[0])

    @property
    def levels(self) -> range:
        return range(self.offset, self.offset + len(self.entries))

    def __getitem__(self, k: int) -> complex:
        if k not in self.levels:
            raise IndexError(f"level {k} not in {self.levels}")
        return complex(self.entries[k - self.offset])

    def _other(self, other):
        if isinstance(other, SequenceValue):
            if other.offset != self.offset or len(other.entries) != len(self.entries):
                raise ValueError("sequence values over different levels")
            return other.entries
        return other

    def __add__(self, other):
        return SequenceValue(self.entries + self._other(other), self.offset)

    __radd__ = __add__

    def __sub__(self, other):
        return SequenceValue(self.entries - self._other(other), self.offset)

    def __mul__(self, other):
        return SequenceValue(self.entries * self._other(other), self.offset)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, SequenceValue) and self.offset == other.offset
                and np.array_equal(self.entries, other.entries))

    def exp(self) -> "SequenceValue":
        return SequenceValue(np.exp(self.entries), self.offset)

    def real(self) -> np.ndarray:
        return self.entries.real

    def deltas(self) -> np.ndarray:
        """|a_k - a_{k-1}| for consecutive levels."""
        return np.abs(np.diff(self.entries))

    def stabilized(self, tol: float, window: int = 2) -> bool:
        """True when the last ``window`` entries agree within ``tol`` (relative)."""
        tail = self.entries[-window:]
        if len(tail) < window:
            return False
        scale = max(np.abs(tail).max(), 1e-300)
        return bool(np.abs(np.diff(tail)).max() / scale < tol)


# ---------------------------------------------------------------------------
# level geometry


@dataclass(frozen=True)
class _Axis:
    """One sampling grid in coarse units: values ``step * j`` for ``lo <= j < hi``."""

    step: Fraction
    lo: int
    hi: int

    @property
    def size(self) -> int:
        return self.hi - self.lo

    @property
    def min(self) -> Fraction:
        return self.step * self.lo

    @property
    def max(self) -> Fraction:
        return self.step * (self.hi - 1)

    def value(self, j: int) -> Fraction:
        return self.step * j

    def floor(self, v) -> int:
        if isinstance(v, (int, Fraction)):
            q = Fraction(v) / self.step
            j = q.numerator // q.denominator
        else:
            q = float(v) / float(self.step)
            r = round(q)
            j = int(r) if abs(q - r) < 1e-9 else math.floor(q)
        return min(max(j, self.lo), self.hi - 1)

    def fiber(self, coarse: "_Axis", j: int) -> tuple[int, int]:
        """Offsets ``[a, b)`` of this (finer) axis that floor onto ``coarse`` offset j."""
        z = coarse.value(j)
        lo_v = -math.inf if j == coarse.lo else z
        hi_v = math.inf if j == coarse.hi - 1 else z + coarse.step
        a = self.lo if lo_v == -math.inf else _ceil(Fraction(lo_v) / self.step)
        b = self.hi if hi_v == math.inf else _ceil(Fraction(hi_v) / self.step)
        a, b = max(a, self.lo), min(b, self.hi)
        return (a, b) if a < b else (a, a)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class Level:
    k: int
    sqrt_n: int
    delta: int

    @property
    def n_star(self) -> int:
        return 4**self.delta

    @property
    def n(self) -> int:
        return self.sqrt_n**2

    @property
    def n_d(self) -> int:
        return self.n_star * self.n

    @cached_property
    def end_axis(self) -> _Axis:
        h = self.n // 2
        return _Axis(Fraction(1, self.sqrt_n), -h, h)

    @cached_property
    def interior_axis(self) -> _Axis:
        h = self.n_d // 4
        return _Axis(Fraction(2, self.n_star * self.sqrt_n), -h, h)

    def axis(self, j: int) -> _Axis:
        return self.end_axis if j in (0, self.n_star) else self.interior_axis

    @property
    def weight_over_sqrt2(self) -> Fraction:
        """mu_k of one point divided by sqrt(2): ``(N^d_k / 2)**(-n*/2)``."""
        return Fraction(2, self.n_d) ** (self.n_star // 2)

    @property
    def grid(self) -> Grid:
        return Grid(self.sqrt_n)

    @property
    def refined_grid(self) -> Grid:
        return Grid.refined(self.sqrt_n, self.delta)


class PathSpace:
    """The levels ``1 .. K_max-1`` of a lattice sequence and delta schedule."""

    def __init__(self, lattices: LatticeSequence, delta: DeltaSchedule, units: UnitSystem):
        if delta.k_max < lattices.k_max:
            raise ValueError("delta schedule shorter than the lattice sequence")
        self.lattices = lattices
        self.delta = delta
        self.units = units
        self.levels = {k: Level(k, lattices.sqrt_n(k), delta(k)) for k in lattices.levels}
        for k in self.levels:
            for r in self.levels:
                if r < k and is_delta_good(k, delta):
                    self._check_nested(r, k)

    def _check_nested(self, r: int, k: int):
        a, b = self.levels[r], self.levels[k]
        if b.sqrt_n % a.sqrt_n:
            raise ValueError(f"sqrt(N_{r})={a.sqrt_n} does not divide sqrt(N_{k})={b.sqrt_n}")
        if b.n_star % a.n_star:
            raise ValueError(f"n*({r}) does not divide n*({k})")

    @property
    def k_max(self) -> int:
        return self.lattices.k_max

    def level(self, k: int) -> Level:
        try:
            return self.levels[k]
        except KeyError:
            raise LevelTooSmallError(f"level {k} is not materialized ({sorted(self.levels)})") from None

    def is_good(self, k: int) -> bool:
        return is_delta_good(k, self.delta)

    def good_levels(self) -> list[int]:
        return [k for k in self.levels if self.is_good(k)]

    # projections and fibers -------------------------------------------------

    def project(self, x: Sequence[int], k: int, r: int) -> tuple[int, ...]:
        """Pr_{kr}: coordinatewise floor of a level-k tuple onto level r < k."""
        if r == k:
            return tuple(x)
        if not self.is_good(k):
            raise NotDeltaGoodError(f"level {k} is not delta-good")
        lk, lr = self.level(k), self.level(r)
        ratio = lk.n_star // lr.n_star
        return tuple(lr.axis(i).floor(lk.axis(i * ratio).value(x[i * ratio]))
                     for i in range(lr.n_star + 1))

    def fiber_ranges(self, x: Sequence[int], k: int, r: int) -> list[tuple[int, int]]:
        """Per-coordinate offset ranges of the level-r tuples projecting onto x."""
        if r <= k:
            raise ValueError("fibers are taken at a finer level")
        if not self.is_good(r):
            raise NotDeltaGoodError(f"level {r} is not delta-good")
        lk, lr = self.level(k), self.level(r)
        ratio = lr.n_star // lk.n_star
        out = []
        for j in range(lr.n_star + 1):
            fine = lr.axis(j)
            if j % ratio:
                out.append((fine.lo, fine.hi))
            else:
                out.append(fine.fiber(lk.axis(j // ratio), x[j // ratio]))
        return out

    def fiber_size(self, x: Sequence[int], k: int, r: int) -> int:
        return math.prod(b - a for a, b in self.fiber_ranges(x, k, r))

    def fiber(self, x: Sequence[int], k: int, r: int) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(a, b) for a, b in self.fiber_ranges(x, k, r)))

    # mu* ----------------------------------------------------------------------

    def mu_star(self, cell: "BasicOpenSet", r: int) -> Fraction:
        """mu*(N^k_x)(r) as an exact multiple of sqrt(2)."""
        k, x = cell.k, cell.x
        if not self.is_good(k):
            raise NotDeltaGoodError(f"basic open sets live on delta-good levels; {k} is not")
        lr = self.level(r)
        if r == k:
            return lr.weight_over_sqrt2
        if r > k:
            return self.fiber_size(x, k, r) * lr.weight_over_sqrt2
        chain = [r] + [q for q in range(r + 1, k) if q in self.levels and self.is_good(q)] + [k]
        factor = Fraction(1)
        for q0, q1 in zip(chain[:-1], chain[1:]):
            factor /= self.fiber_size(self.project(x, k, q0), q0, q1)
        return factor * lr.weight_over_sqrt2

    def mu_star_sequence(self, cell: "BasicOpenSet") -> list[Fraction]:
        return [self.mu_star(cell, r) for r in sorted(self.levels)]

    def mu_star_value(self, cell: "BasicOpenSet") -> SequenceValue:
        return SequenceValue([SQRT2 * float(v) for v in self.mu_star_sequence(cell)], min(self.levels))

    def point_measure(self, r: int) -> Fraction:
        """mu_r({x}) / sqrt(2)."""
        return self.level(r).weight_over_sqrt2

    # representatives ------------------------------------------------------------

    def representative(self, cell: "BasicOpenSet", rng: np.random.Generator | None = None) -> "PathApprox":
        """Level tables of a path in the cell.

        Coarser levels are projections; finer levels pick, level by level, a
        member of the fiber over the previous choice: the least one by
        default, a uniform one when ``rng`` is given. Nested floors make the
        choices coherent, so one C^1 path through the finest points realizes
        every table.
        """
        k, x = cell.k, tuple(cell.x)
        tables = {k: x}
        for r in self.levels:
            if r < k:
                tables[r] = self.project(x, k, r)
        prev_k, prev = k, x
        for r in sorted(q for q in self.levels if q > k):
            if not self.is_good(r):
                raise NotDeltaGoodError(f"level {r} is not delta-good")
            ranges = self.fiber_ranges(prev, prev_k, r)
            if rng is None:
                y = tuple(a for a, _ in ranges)
            else:
                y = tuple(int(rng.integers(a, b)) for a, b in ranges)
            tables[r] = y
            prev_k, prev = r, y
        return PathApprox(self, tables)

    def cells_at(self, cell: "BasicOpenSet", level: int) -> Iterator["BasicOpenSet"]:
        """The level-``level`` basic open sets partitioning ``cell``."""
        if level == cell.k:
            yield cell
            return
        if level < cell.k:
            raise ValueError("refinement must go to a finer level")
        for y in self.fiber(cell.x, cell.k, level):
            yield BasicOpenSet(level, y)


@dataclass(frozen=True)
class BasicOpenSet:
    """Paths whose level-k sampling equals ``x``; mesh ``1/k``."""

    k: int
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))

    @property
    def mesh(self) -> Fraction:
        return Fraction(1, self.k)

    def contains(self, path: "PathApprox") -> bool:
        return path.tables.get(self.k) == self.x


@dataclass
class PathApprox:
    """Level tables ``k -> offsets`` (see the module docstring for the axes)."""

    space: PathSpace
    tables: dict
    source: Callable | None = None

    def values(self, k: int) -> list[Fraction]:
        lv = self.space.level(k)
        return [lv.axis(j).value(v) for j, v in enumerate(self.tables[k])]

    def float_values(self, k: int) -> np.ndarray:
        return np.array([float(v) for v in self.values(k)])

    def check_coherent(self) -> bool:
        for k in self.tables:
            if not self.space.is_good(k):
                continue
            for r in self.tables:
                if r < k and self.space.project(self.tables[k], k, r) != tuple(self.tables[r]):
                    return False
        return True


def sample_path(f: Callable, space: PathSpace) -> PathApprox:
    """Floor-sample f at the times ``j t/n*(k)`` on every level.

    Endpoints go to X_k, interior points to X^2d_k; values below a grid fall
    back to its minimum (and above it, to its maximum).
    """
    t = space.units.t
    tables = {}
    for k, lv in space.levels.items():
        ns = lv.n_star
        tables[k] = tuple(lv.axis(j).floor(f(j * t / ns)) for j in range(ns + 1))
    return PathApprox(space, tables, f)


# ---------------------------------------------------------------------------
# actions


def discrete_action(p: PathApprox, f_v: Potential, units: UnitSystem | None = None) -> SequenceValue:
    """S(p)(k) = dt sum_j S*(p_{j-1}, p_j) with dt = t / n*(k), coarse units."""
    u = units or p.space.units
    ks = sorted(p.tables)
    out = []
    for k in ks:
        x = p.float_values(k)
        ns = len(x) - 1
        dt = u.t / ns
        kin = u.m * np.diff(x) ** 2 / (2 * dt)
        pot = dt * np.asarray(f_v(x[:-1]), dtype=float)
        out.append(float(np.sum(kin - pot)))
    return SequenceValue(out, ks[0])


def classical_action(f: Callable, f_v: Potential, units: UnitSystem, df: Callable | None = None,
                     quadrature_n: int = 200) -> tuple[float, float]:
    """Integral over [0, t] of ``m f'(u)**2 / 2 - f_v(f(u))``, with an error estimate.

    ``df`` defaults to a central-difference derivative.
    """
    if df is None:
        h = 1e-6

        def df(s):
            return (f(s + h) - f(s - h)) / (2 * h)

    def lagrangian(s):
        return units.m * df(s) ** 2 / 2 - float(f_v(f(s)))

    val, err = integrate.quad(lagrangian, 0.0, units.t, limit=quadrature_n, epsabs=1e-13, epsrel=1e-12)
    return val, err


# ---------------------------------------------------------------------------
# Riemann sums


def riemann_integral(space: PathSpace, f: Callable, cells: Iterable[BasicOpenSet], level: int | None = None,
                     rng: np.random.Generator | None = None) -> SequenceValue:
    """I_f(X) = sum over the partition X of f(p_N) mu*(N).

    The partition refines every input cell to ``level`` (default: the finest
    input level); ``f`` maps a PathApprox to a SequenceValue over all levels.
    """
    cells = list(cells)
    if level is None:
        level = max(c.k for c in cells)
    if level not in space.levels:
        raise LevelTooSmallError(f"partition level {level} is not materialized")
    total = None
    for c in cells:
        for n in space.cells_at(c, level):
            term = f(space.representative(n, rng)) * space.mu_star_value(n)
            total = term if total is None else total + term
    return total


def exact_mu_sum(space: PathSpace, cells: Iterable[BasicOpenSet], r: int) -> Fraction:
    """sum_N mu*(N)(r) over a family, exactly (as a multiple of sqrt 2)."""
    return sum((space.mu_star(c, r) for c in cells), Fraction(0))


def covers_fiber(space: PathSpace, cells: Sequence[BasicOpenSet], x: Sequence[int], r: int) -> bool:
    """Whether the union of ``cells`` is the whole basic open set N^r_x."""
    finest = max(c.k for c in cells)
    members = {}
    for c in cells:
        members.setdefault(c.k, set()).add(c.x)
    for y in space.fiber(x, r, finest) if finest > r else [tuple(x)]:
        if not any(space.project(y, finest, k) in xs for k, xs in members.items()):
            return False
    return True


# ---------------------------------------------------------------------------
# restricted path sets and the path-space estimator


@dataclass(frozen=True)
class PathBox:
    """Level-k cells whose endpoints lie in two offset ranges; interior free."""

    space: PathSpace
    k: int
    start: tuple[int, int]
    end: tuple[int, int]

    def __len__(self) -> int:
        lv = self.space.level(self.k)
        return ((self.start[1] - self.start[0]) * (self.end[1] - self.end[0])
                * lv.interior_axis.size ** (lv.n_star - 1))

    def __iter__(self) -> Iterator[BasicOpenSet]:
        lv = self.space.level(self.k)
        inner = range(lv.interior_axis.lo, lv.interior_axis.hi)
        for a in range(*self.start):
            for mid in itertools.product(inner, repeat=lv.n_star - 1):
                for b in range(*self.end):
                    yield BasicOpenSet(self.k, (a,) + mid + (b,))


def restricted_path_set(space: PathSpace, y0, y1, r: int, k: int, strict: bool = True) -> PathBox:
    """Level-k cells with ``p_0`` in ``[y0-1/r, y0+1/r)`` and ``p_n*`` in ``[y1-1/r, y1+1/r)``."""
    lv = space.level(k)
    if not space.is_good(k):
        raise NotDeltaGoodError(f"level {k} is not delta-good")
    if strict:
        for y in (y0, y1):
            for e in (Fraction(y) - Fraction(1, r), Fraction(y) + Fraction(1, r)):
                if (e * lv.sqrt_n).denominator != 1:
                    raise LevelTooSmallError(f"window edge {e} is not on the level-{k} grid")
    g = lv.grid
    return PathBox(space, k, window_offsets(g, y0, r), window_offsets(g, y1, r))


def _step_phase_matrix(lv: Level, f_v: Potential, u: UnitSystem) -> tuple[np.ndarray, np.ndarray]:
    """exp(i dt S*(x, y) / hbar) on X^2d_k x X^2d_k, and the coarse values of X^2d_k."""
    ax = lv.interior_axis
    j = np.arange(ax.lo, ax.hi, dtype=np.int64)
    x = j * float(ax.step)
    ns = lv.n_star
    # exponent / pi = n* (y - x)**2 / 2 - c(x) / n*, with c = 2 t f_v / h
    d = (j[None, :] - j[:, None]).astype(np.float64)
    kin = ns * d * d * float(ax.step) ** 2 / 2
    pot = 2 * u.t * np.asarray(f_v(x), dtype=float) / float(u.h) / ns
    return np.exp(1j * np.pi * np.mod(kin - pot[:, None], 2.0)), x


def path_phase_sum(box: PathBox, f_v: Potential, method: str = "factorized") -> complex:
    """sum over the box of exp(i S(p)(k) / hbar).

    ``enumerate`` visits every cell; ``factorized`` regroups the same finite
    sum step by step (the sum of products factors over time slices).
    """
    space, k = box.space, box.k
    lv = space.level(k)
    u = space.units
    ax = lv.interior_axis
    ratio = lv.n_star // 2  # end offsets -> interior offsets (end step = ratio * interior step)
    e, _ = _step_phase_matrix(lv, f_v, u)
    s_idx = np.arange(*box.start) * ratio - ax.lo
    e_idx = np.arange(*box.end) * ratio - ax.lo
    if method == "factorized":
        v = e[s_idx, :].sum(axis=0)
        for _ in range(lv.n_star - 2):
            v = v @ e
        return complex((v @ e[:, e_idx]).sum())
    if method == "enumerate":
        n_int = lv.n_star - 1
        m = ax.size
        if len(box) > 5 * 10**7:
            raise ValueError("box too large to enumerate")
        total = 0j
        mids = np.indices((m,) * n_int).reshape(n_int, -1) if n_int else np.zeros((0, 1), dtype=np.int64)
        for a in s_idx:
            for b in e_idx:
                pts = [np.full(mids.shape[1], a)] + list(mids) + [np.full(mids.shape[1], b)]
                ph = np.ones(mids.shape[1], dtype=np.complex128)
                for p, q in zip(pts[:-1], pts[1:]):
                    ph *= e[p, q]
                total += ph.sum()
        return complex(total)
    raise ValueError(f"unknown method {method!r}")


def operator_side(y0, y1, r: int, lv: Level, f_v: Potential, u: UnitSystem,
                  route: str = "direct") -> tuple[complex, str]:
    """(r**2/4) <F_k(phi_{y1,r})| L^t_{k-delta} |F_k(phi_{y0,r})>.

    ``direct`` is the Trotter product on H_k itself, 4**delta steps of
    ``t / 4**delta``. ``lifted`` runs the same schedule on the refined space
    H^d_k between G_k images; that is the operator the path sum reproduces.
    The two agree for f_v = 0 (the product collapses to one full-time kinetic
    step) but not once a potential is present.
    """
    g = lv.grid
    a = embed_step(y0, r, g).amplitudes
    b = embed_step(y1, r, g).amplitudes
    if route == "lifted":
        ua = lifted_trotter(a, lv.delta, f_v, lv.sqrt_n, u)
    elif route == "direct":
        ua = trotter_power(a, lv.n_star, lv.delta, f_v, g, u)
    else:
        raise ValueError(f"unknown route {route!r}")
    return r * r / 4 * complex(np.vdot(b, ua)), route


@dataclass
class PathSpaceRecord:
    k: int
    r: int
    s: int
    estimate: complex | None
    operator_side: complex
    operator_route: str
    delta_to_previous: float | None = None

    def to_json(self) -> dict:
        return {
            "k": self.k, "r": self.r, "s": self.s,
            "estimate_re": None if self.estimate is None else self.estimate.real,
            "estimate_im": None if self.estimate is None else self.estimate.imag,
            "operator_side_re": self.operator_side.real,
            "operator_side_im": self.operator_side.imag,
            "operator_route": self.operator_route,
            "delta_to_previous": self.delta_to_previous,
        }


def path_space_level_estimate(space: PathSpace, y0, y1, r: int, k: int, f_v: Potential,
                            method: str = "factorized") -> complex:
    """(m/2 pi hbar t)**0.5 (r**2 / 4 sqrt(N_k)) e^{-i pi n*/4} I_f(X)(k), f = e^{iS/hbar}.

    Only the level-k entry of the Riemann sum enters; there it is the sum of
    ``exp(i S(p)(k)/hbar) mu_k({x})`` over the restricted cells.
    """
    lv = space.level(k)
    u = space.units
    box = restricted_path_set(space, y0, y1, r, k, strict=False)
    integral = SQRT2 * float(lv.weight_over_sqrt2) * path_phase_sum(box, f_v, method)
    pre = math.sqrt(u.m / (2 * math.pi * u.hbar * u.t)) * r * r / (4 * lv.sqrt_n)
    phase = exact.evaluate(_unit_vector(lv.n_star % 8, 8), 8).conjugate()  # e^{-i pi n*/4}
    return complex(pre * phase * integral)


def _unit_vector(j: int, m: int) -> np.ndarray:
    v = np.zeros(m, dtype=np.int64)
    v[j] = 1
    return v


def path_space_estimate(space: PathSpace, y0, y1, r: int, f_v: Potential, levels: Sequence[int] | None = None,
                      path_side: bool | Callable[[Level], bool] = True, s: int | None = None,
                      route: str = "direct") -> list[PathSpaceRecord]:
    """Path-space estimate and operator-side value for each level.

    ``path_side`` may be a predicate on the level, so large levels can skip
    the path sum and report the operator side alone.
    """
    levels = sorted(space.levels) if levels is None else list(levels)
    out: list[PathSpaceRecord] = []
    prev = None
    for k in levels:
        lv = space.level(k)
        want = path_side(lv) if callable(path_side) else path_side
        est = path_space_level_estimate(space, y0, y1, r, k, f_v) if want else None
        op, used = operator_side(y0, y1, r, lv, f_v, space.units, route)
        cur = est if est is not None else op
        rec = PathSpaceRecord(k, r, lv.delta if s is None else s, est, op, used,
                             None if prev is None else abs(cur - prev))
        prev = cur
        out.append(rec)
    return out
