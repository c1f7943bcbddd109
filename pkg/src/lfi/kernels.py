"""Closed-form propagators, the spiking rule and window extraction.

With th/m = 2 the free continuum kernel at time t is
``e^{-i pi/4} (1/2)**0.5 exp(i pi (x1 - x0)**2 / 2)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from .hilbert import embed_step, inner_product
from .lattice import Grid, window_offsets
from .operators import apply_kinetic
from .units import UnitSystem

SQRT_MINUS_I = cmath.exp(-1j * math.pi / 4)  # principal branch of (1/i)**0.5


class CausticError(ValueError):
    pass


class EmptyWindowError(ValueError):
    pass


@dataclass(frozen=True)
class KernelValue:
    value: complex
    spiked_zero: bool = False

    def __post_init__(self):
        if self.spiked_zero and self.value != 0:
            raise ValueError("a spiked entry must be exactly zero")

    def __complex__(self):
        return complex(self.value)


def free_kernel_continuum(x0, x1, u: UnitSystem, t: float | None = None, hbar: float | None = None):
    """(m / 2 pi i hbar t)**0.5 exp(i m (x1 - x0)**2 / 2 hbar t).

    ``t`` and ``hbar`` default to the unit system's values. Accepts arrays.
    """
    t = u.t if t is None else float(t)
    hbar = u.hbar if hbar is None else float(hbar)
    if t <= 0:
        raise ValueError("t must be positive")
    dx = np.asarray(x1, dtype=float) - np.asarray(x0, dtype=float)
    amp = math.sqrt(u.m / (2 * math.pi * hbar * t)) * SQRT_MINUS_I
    out = amp * np.exp(1j * u.m * dx * dx / (2 * hbar * t))
    return complex(out) if np.ndim(out) == 0 else out


def spiking_divisor(g: Grid, frac=1) -> int:
    """tau h_eff / m for the grid's own units; must be an integer."""
    d = Fraction(frac) * 2 * 4**g.delta
    if d.denominator != 1:
        raise ValueError(f"tau h/m = {d} is not an integer; the closed form does not apply")
    return d.numerator


def free_kernel_lattice(x0, x1, g: Grid, u: UnitSystem, frac=1) -> KernelValue:
    """Closed form of <x1| exp(-i tau P**2 / 2 m hbar) |x0> on the grid.

    Non-zero iff ``tau h/m`` divides the index difference, where it equals
    ``N**-0.5 (tau h/m) K*(x0, x1, tau)``. Inputs are grid values in the
    grid's ``unit_scale``; on refined grids h and hbar are the scaled ones.
    """
    i0, i1 = g.index_of(x0), g.index_of(x1)
    d = spiking_divisor(g, frac)
    diff = (g.wrapped(i1) - g.wrapped(i0)).item()
    if diff % d:
        return KernelValue(0j, True)
    hs = 4**g.delta
    x_own = lambda i: float(g.wrapped(i).item()) / g.sqrt_n  # noqa: E731
    k = free_kernel_continuum(x_own(i0), x_own(i1), u, float(frac) * u.t, hs * u.hbar)
    return KernelValue(g.n**-0.5 * d * k)


def free_kernel_lattice_matrix(g: Grid, u: UnitSystem, frac=1) -> np.ndarray:
    """All entries of the closed form; index difference is taken mod N."""
    d = spiking_divisor(g, frac)
    w = g.wrapped()
    diff = w[:, None] - w[None, :]
    hs = 4**g.delta
    x = w / g.sqrt_n
    k = free_kernel_continuum(x[None, :], x[:, None], u, float(frac) * u.t, hs * u.hbar)
    return np.where(diff % d == 0, g.n**-0.5 * d * k, 0)


def mehler_kernel(x0, x1, omega: float, u: UnitSystem, t: float | None = None):
    """Harmonic oscillator kernel.

    (m w / 2 pi i hbar sin wt)**0.5 exp(i m w ((x0**2 + x1**2) cos wt - 2 x0 x1) / 2 hbar sin wt)
    """
    t = u.t if t is None else float(t)
    s = math.sin(omega * t)
    if abs(s) < 1e-9:
        raise CausticError(f"caustic at omega t = {omega * t}")
    c = math.cos(omega * t)
    x0 = np.asarray(x0, dtype=float)
    x1 = np.asarray(x1, dtype=float)
    pre = cmath.sqrt(u.m * omega / (2 * math.pi * u.hbar * s)) * SQRT_MINUS_I
    out = pre * np.exp(1j * u.m * omega * ((x0**2 + x1**2) * c - 2 * x0 * x1) / (2 * u.hbar * s))
    return complex(out) if np.ndim(out) == 0 else out


def extract_propagator_window(y0, y1, p: int, evolution: Callable, g: Grid, u: UnitSystem | None = None,
                              normalization: str = "continuum") -> complex:
    """Windowed matrix element ``c * <F(phi_{y1,p})| U |F(phi_{y0,p})>``.

    ``normalization="continuum"`` uses ``c = p**2/4`` which turns the window
    average into a kernel value; ``"literal"`` uses ``c = p**2 / (4 sqrt(N))``.
    ``evolution`` maps a state (array) to a state.
    """
    if window_offsets(g, y0, p) == (0, 0) or window_offsets(g, y1, p) == (0, 0):
        raise EmptyWindowError(f"empty window at y0={y0} or y1={y1}, p={p}")
    a = embed_step(y0, p, g)
    b = embed_step(y1, p, g)
    ua = evolution(a.amplitudes)
    val = complex(np.vdot(b.amplitudes, np.asarray(ua)))
    c = p * p / 4
    if normalization == "literal":
        c /= g.sqrt_n
    elif normalization != "continuum":
        raise ValueError(f"unknown normalization {normalization!r}")
    return c * val


def free_propagator_direct(y0, y1, g: Grid, u: UnitSystem) -> KernelValue:
    """(sqrt(N)/2) <y1| U_kin(t) |y0>, reported as spiked when the index gap is odd."""
    i0, i1 = g.index_of(y0), g.index_of(y1)
    col = np.zeros(g.n, dtype=np.complex128)
    col[i0] = 1.0
    val = apply_kinetic(col, 1, g, u)[i1]
    if (i1 - i0) % spiking_divisor(g):
        return KernelValue(0j, True)
    return KernelValue(complex(g.sqrt_n / 2 * val))


def window_average(kernel: Callable, y0, y1, p: int, epsabs: float = 1e-11) -> complex:
    """(p**2/4) of the double integral of kernel(x0, x1) over both windows.

    The independent quadrature reference for window extraction.
    """
    h = 1.0 / p
    a0, a1 = float(y0) - h, float(y1) - h

    def part(fn):
        return integrate.dblquad(lambda x1, x0: fn(kernel(x0, x1)), a0, a0 + 2 * h,
                                 a1, a1 + 2 * h, epsabs=epsabs, epsrel=1e-10)[0]

    return p * p / 4 * complex(part(np.real), part(np.imag))


def free_window_average(y0, y1, p: int, u: UnitSystem) -> complex:
    """Window average of the free kernel reduced to one integral over the gap.

    The kernel depends only on ``x1 - x0``, whose density over the two
    windows is the triangle ``(2/p - |v - (y1 - y0)|)_+``.
    """
    h = 2.0 / p
    c = float(y1) - float(y0)
    amp = free_kernel_continuum(0.0, 0.0, u)
    beta = u.m / (2 * u.hbar * u.t)

    def f(v, part):
        return (h - abs(v - c)) * part(np.exp(1j * beta * v * v))

    re = integrate.quad(f, c - h, c + h, args=(np.real,), points=[c], epsabs=1e-13, limit=200)[0]
    im = integrate.quad(f, c - h, c + h, args=(np.imag,), points=[c], epsabs=1e-13, limit=200)[0]
    return p * p / 4 * amp * complex(re, im)


def relative_error(value: complex, reference: complex) -> float:
    return abs(value - reference) / abs(reference)
