"""Discrete path sums over the refined lattice and their transfer-matrix twin.

On the refined grid X^d (``sqrt(N^d) = 2**delta sqrt(N_k)``) the Trotter
step ``K(dt) V(dt)`` with ``dt = t/n*`` and ``n* = 4**delta`` has entries

    N_d**-0.5 (1 - i) exp(i dt S*(x0, x1) / hbar_d)

when x1 - x0 is an even number of refined steps, and zero otherwise. So the
matrix element of the full product is a sum over paths whose interior points
all share the parity of the start point. In coarse units the exponent of one
step divided by pi is ``n* (x1 - x0)**2 / 2 - c(x0) / n*`` with
``c = 2 t f_v / h``; with x = j / (2**delta sqrt(N_d)) the kinetic part is
``(j1 - j0)**2 / (2 N_d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import exact
from .lattice import Grid
from .operators import ResourceCapError, trotter_power
from .potentials import Potential
from .units import UnitSystem

DEFAULT_BRUTEFORCE_CAP = 10**7


@dataclass(frozen=True)
class ActionDensityParams:
    """Inputs of S*(x, y) = m (y - x)**2 / (2 dt**2) - f_v_d(x).

    ``hbar`` is the Planck constant paired with ``f_v_d`` (scaled on H^d).
    """

    m: float
    dt: float
    f_v_d: Callable
    hbar: float = 1.0
    n_star: int = 1
    t: float | None = None

    def __post_init__(self):
        if self.t is not None and not math.isclose(self.dt * self.n_star, self.t, rel_tol=1e-14):
            raise ValueError("dt * n_star must equal t")

    @classmethod
    def for_grid(cls, g: Grid, u: UnitSystem, f_v: Potential) -> "ActionDensityParams":
        """Scaled parameters on a refined grid; values are in its own units."""
        hs = 4**g.delta
        s = 2**g.delta

        def f_v_d(x):
            return hs * np.asarray(f_v(np.asarray(x, dtype=float) / s), dtype=float)

        return cls(u.m, u.t / hs, f_v_d, hs * u.hbar, hs, u.t)


def action_density(x, y, params: ActionDensityParams):
    """m (y - x)**2 / (2 dt**2) - f_v_d(x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = params.m * (y - x) ** 2 / (2 * params.dt**2) - np.asarray(params.f_v_d(x), dtype=float)
    return float(out) if out.ndim == 0 else out


def path_phase(path: Sequence, params: ActionDensityParams) -> complex:
    """exp(i dt sum_j S*(x_{j-1}, x_j) / hbar) for a path of n*+1 points."""
    p = np.asarray(path, dtype=float)
    if params.n_star and len(p) != params.n_star + 1 and params.n_star != 1:
        raise ValueError(f"path must have {params.n_star + 1} points, got {len(p)}")
    s = np.sum(action_density(p[:-1], p[1:], params))
    return complex(np.exp(1j * params.dt * s / params.hbar))


@dataclass(frozen=True)
class PathMeasure:
    """Per-point weight sqrt(2) (N_d/2)**(-n*/2) on (X^2d)**(n*-1)."""

    n_d: int
    n_star: int

    @property
    def weight_over_sqrt2(self) -> Fraction:
        return Fraction(2, self.n_d) ** Fraction(self.n_star, 2) if self.n_star % 2 == 0 else None

    @property
    def cell_weight(self) -> float:
        return math.sqrt(2) * (self.n_d / 2) ** (-self.n_star / 2)

    def total_mass(self) -> float:
        return (self.n_d // 2) ** (self.n_star - 1) * self.cell_weight


def _interior_offsets(g: Grid, parity: int) -> np.ndarray:
    half = g.n // 2
    start = -half + (parity % 2)
    return np.arange(start, half, 2, dtype=np.int64)


def _step_exponent_tables(g: Grid, f_v: Potential, u: UnitSystem):
    """Exact per-step exponent / pi as (kinetic numerators, potential numerators, L).

    Kinetic over pi for an offset gap d is ``d**2 / (2 N_d)``;
    the potential term is ``-c(x)/n*``. Everything is returned over the
    common denominator L.
    """
    n_star = 4**g.delta
    offs = g.sorted_offsets()
    step = g.spacing
    pot = [] if f_v.is_free else [f_v.phase_over_pi(j * step, Fraction(1, n_star), u) for j in offs]
    den = 2 * g.n
    for q in pot:
        den = math.lcm(den, q.denominator)
    pot_num = [int(q * den) for q in pot] if pot else None
    return den // (2 * g.n), pot_num, den, offs


def _float_step_exponent(g: Grid, f_v: Potential, u: UnitSystem):
    n_star = 4**g.delta
    offs = g.sorted_offsets()
    x = offs * float(g.spacing)
    pot = np.zeros(len(offs)) if f_v.is_free else 2 * u.t * np.asarray(f_v(x), dtype=float) / float(u.h) / n_star
    return 1.0 / (2 * g.n), pot, offs


def trotter_path_prefactor(n_d: int, n_star: int) -> complex:
    """(N_d**-0.5 (dt h/m) (m / 2 pi i hbar dt)**0.5)**n* = (N_d**-0.5 (1 - i))**n*."""
    return (n_d**-0.5 * (1 - 1j)) ** n_star


def bruteforce_path_integral(x0, x_end, g: Grid, f_v: Potential, u: UnitSystem,
                             mode: str = "float", prefactor: str = "trotter",
                             cap: int = DEFAULT_BRUTEFORCE_CAP, return_counts: bool = False):
    """Sum e^{i dt sum S* / hbar} over every interior path, times the prefactor.

    Parameters
    ----------
    x0, x_end : rational
        Endpoints in the grid's units (coarse units on a refined grid).
    g : Grid
        The refined grid; ``n* = 4**g.delta`` (``g.delta == 0`` gives one step).
    mode : {"float", "exact"}
        ``exact`` accumulates integer exponents modulo 2L and bins them into
        counts of 2L-th roots of unity before a single evaluation.
    prefactor : {"trotter", "measure"}
        ``measure`` writes the sum as ``(m/2 pi hbar t)**0.5`` times the
        integral over the normalized point measure; it needs ``8 | n*``.
    """
    n_star = 4**g.delta
    n_d = g.n
    if prefactor == "measure" and n_star % 8:
        raise ValueError(f"the measure form needs n* divisible by 8, got n*={n_star}")
    i0, i_end = g.index_of(x0), g.index_of(x_end)
    j0, j_end = int(g.wrapped(i0)), int(g.wrapped(i_end))
    if (j_end - j0) % 2:
        return (0j, None) if return_counts else 0j
    interior = _interior_offsets(g, j0)
    n_int = n_star - 1
    terms = len(interior) ** n_int
    if terms > cap:
        raise ResourceCapError(f"{terms} paths exceed the brute-force cap {cap}")

    half = n_d // 2
    if mode == "exact":
        if not (f_v.is_free or f_v.exact):
            raise NotImplementedError("exact mode needs a potential of the form P(x)/pi")
        kin_scale, pot_num, den, offs = _step_exponent_tables(g, f_v, u)
        modulus = 2 * den
        pot_tab = (np.array([int(v) % modulus for v in pot_num], dtype=np.int64)
                   if pot_num is not None else np.zeros(n_d, dtype=np.int64))

        def step_exp(a, b):
            d = (b - a) % modulus
            return (kin_scale * ((d * d) % modulus) - pot_tab[a + half]) % modulus
    elif mode == "float":
        kin_c, pot_tab, offs = _float_step_exponent(g, f_v, u)

        def step_exp(a, b):
            d = (b - a).astype(np.float64)
            return kin_c * d * d - pot_tab[a + half]
    else:
        raise ValueError(f"unknown mode {mode!r}")

    counts = np.zeros(2 * den if mode == "exact" else 0, dtype=np.int64)
    total = 0j
    if n_int == 0:
        e = np.atleast_1d(step_exp(np.int64(j0), np.int64(j_end)))
        if mode == "exact":
            counts += exact.bin_phases(e, modulus)
        else:
            total += np.exp(1j * np.pi * e).sum()
    else:
        rest = n_int - 1
        grids = np.meshgrid(*([interior] * rest), indexing="ij") if rest else []
        rest_cols = [gr.ravel() for gr in grids]
        for first in interior:
            cols = [np.full(max(1, len(interior) ** rest), first, dtype=np.int64)] + rest_cols
            pts = [np.full_like(cols[0], j0)] + cols + [np.full_like(cols[0], j_end)]
            acc = 0
            for a, b in zip(pts[:-1], pts[1:]):
                acc = acc + step_exp(a, b)
            if mode == "exact":
                counts += exact.bin_phases(acc % modulus, modulus)
            else:
                total += np.exp(1j * np.pi * acc).sum()
    if mode == "exact":
        total = complex(exact.evaluate(counts, modulus))
    if prefactor == "trotter":
        val = trotter_path_prefactor(n_d, n_star) * total
    elif prefactor == "measure":
        meas = PathMeasure(n_d, n_star)
        val = math.sqrt(u.m / (2 * math.pi * u.hbar * u.t)) * meas.cell_weight * total
    else:
        raise ValueError(f"unknown prefactor {prefactor!r}")
    if return_counts:
        return complex(val), (counts if mode == "exact" else None)
    return complex(val)


def transfer_matrix_path_integral(x0, x_end, g: Grid, f_v: Potential, u: UnitSystem) -> complex:
    """<x_end| (K(dt) V(dt))**n* |x0> by n* FFT-based steps."""
    i0, i_end = g.index_of(x0), g.index_of(x_end)
    col = np.zeros(g.n, dtype=np.complex128)
    col[i0] = 1.0
    out = trotter_power(col, 4**g.delta, g.delta, f_v, g, u)
    return complex(out[i_end])


def transfer_matrix(g: Grid, f_v: Potential, u: UnitSystem) -> np.ndarray:
    """Dense matrix of the full Trotter product on the refined grid."""
    from .operators import dense_matrix

    return dense_matrix(lambda cols: trotter_power(cols, 4**g.delta, g.delta, f_v, g, u), g.n)
