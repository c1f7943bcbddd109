"""Choosing tau(k) and delta(k) from finite-truncation comparisons.

For a test family psi_i = phi_{y,r}, level k accepts s when some
``s <= s' <= k`` satisfies

(i)  ||K^t psi_i - L*_{s'} psi_i|| < 1/s for all i <= s, and
(ii) |<psi_i|K^t psi_j> - <F_k psi_i| L^t_{k-delta_s'} |F_k psi_j>| < 1/s
     for all i, j <= s.

tau(k) is the largest accepted s and delta(k) its least witness s'; (1, 1)
when nothing is accepted. K^t and the continuum Trotter product L*_{s'} both
have kernels of the form ``A exp(i(a x**2 + b x y + c y**2))`` for free and
harmonic potentials, so they compose in closed form and act on step
functions through Fresnel integrals. The norm in (i) is taken on [-R, R]
with the trapezoid rule; the tail and step-halving errors are reported as a
budget next to the threshold.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .hilbert import embed_step
from .lattice import Grid
from .operators import ResourceCapError, lifted_trotter
from .potentials import HarmonicPotential, Potential
from .units import UnitSystem


class ReferenceUnavailableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# enumeration of test functions


def _height(y: Fraction, r: int) -> int:
    return max(abs(y.numerator) + y.denominator, r)


@dataclass
class PsiEnumeration:
    """(y, r) pairs ordered by ``max(|num(y)| + den(y), r)``, ties by (y, r)."""

    _items: list = field(default_factory=list)
    _height: int = 0

    def _extend(self):
        h = self._height + 1
        ys = set()
        for den in range(1, h + 1):
            for num in range(-(h - den), h - den + 1):
                ys.add(Fraction(num, den))
        new = sorted((y, r) for y in ys for r in range(1, h + 1) if _height(y, r) == h)
        self._items.extend(new)
        self._height = h

    def first(self, n: int) -> list[tuple[Fraction, int]]:
        while len(self._items) < n:
            self._extend()
        return list(self._items[:n])

    def __getitem__(self, i: int) -> tuple[Fraction, int]:
        return self.first(i + 1)[i]


# ---------------------------------------------------------------------------
# Gaussian-form kernels


@dataclass(frozen=True)
class GaussianKernel:
    """K(x, y) = amp * exp(i (a x**2 + b x y + c y**2)); x is the output point."""

    amp: complex
    a: float
    b: float
    c: float

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.amp * np.exp(1j * (self.a * x * x + self.b * x * y + self.c * y * y))

    def after(self, first: "GaussianKernel") -> "GaussianKernel":
        """Kernel of ``self`` applied after ``first``."""
        cc = self.c + first.a
        if abs(cc) < 1e-14:
            raise ArithmeticError("degenerate composition")
        amp = self.amp * first.amp * cmath.sqrt(1j * math.pi / cc)
        return GaussianKernel(amp,
                              self.a - self.b**2 / (4 * cc),
                              -self.b * first.b / (2 * cc),
                              first.c - first.b**2 / (4 * cc))

    def times_input_phase(self, q: float) -> "GaussianKernel":
        """Multiply by exp(i q y**2) on the input side."""
        return GaussianKernel(self.amp, self.a, self.b, self.c + q)

    def apply_step(self, x, lo: float, hi: float):
        """(K 1_[lo, hi))(x) = integral over [lo, hi] of K(x, y) dy."""
        x = np.asarray(x, dtype=float)
        c, b = self.c, self.b
        if abs(c) < 1e-14:
            # linear phase in y
            k = b * x
            small = np.abs(k) < 1e-12
            ks = np.where(small, 1.0, k)
            val = np.where(small, hi - lo, (np.exp(1j * ks * hi) - np.exp(1j * ks * lo)) / (1j * ks))
            return self.amp * np.exp(1j * self.a * x * x) * val
        shift = b * x / (2 * c)
        scale = math.sqrt(2 * abs(c) / math.pi)
        s1, c1 = special.fresnel(scale * (hi + shift))
        s0, c0 = special.fresnel(scale * (lo + shift))
        sgn = 1.0 if c > 0 else -1.0
        integral = ((c1 - c0) + 1j * sgn * (s1 - s0)) / scale
        return self.amp * np.exp(1j * (self.a * x * x - c * shift * shift)) * integral


def free_gaussian(u: UnitSystem, tau: float) -> GaussianKernel:
    beta = u.m / (2 * u.hbar * tau)
    amp = cmath.sqrt(u.m / (2 * math.pi * u.hbar * tau)) * cmath.exp(-1j * math.pi / 4)
    return GaussianKernel(amp, beta, -2 * beta, beta)


def mehler_gaussian(u: UnitSystem, omega: float, tau: float) -> GaussianKernel:
    s, co = math.sin(omega * tau), math.cos(omega * tau)
    if abs(s) < 1e-9:
        raise ArithmeticError("caustic")
    amp = cmath.sqrt(u.m * omega / (2 * math.pi * u.hbar * s)) * cmath.exp(-1j * math.pi / 4)
    g = u.m * omega / (2 * u.hbar * s)
    return GaussianKernel(amp, g * co, -2 * g, g * co)


def _spring(f_v: Potential) -> float:
    if f_v.is_free:
        return 0.0
    if isinstance(f_v, HarmonicPotential):
        return f_v.spring
    coeffs = getattr(f_v, "coeffs", None)
    if coeffs is not None and len(coeffs) <= 3 and all(c == 0 for c in coeffs[:2]):
        q = 2 * float(coeffs[2])
        return q / math.pi if f_v.exact else q
    raise ReferenceUnavailableError("a closed-form reference needs a free or harmonic potential")


def reference_kernel(f_v: Potential, u: UnitSystem) -> GaussianKernel:
    """K^t for free and harmonic potentials."""
    q = _spring(f_v)
    if q == 0:
        return free_gaussian(u, u.t)
    return mehler_gaussian(u, math.sqrt(q / u.m), u.t)


def continuum_trotter_kernel(f_v: Potential, u: UnitSystem, n_steps: int) -> GaussianKernel:
    """Kernel of ``(K_free(dt) V(dt))**n_steps`` on the real line."""
    q = _spring(f_v)
    dt = u.t / n_steps
    step = free_gaussian(u, dt).times_input_phase(-dt * q / (2 * u.hbar))
    out = step
    for _ in range(n_steps - 1):
        out = step.after(out)
    return out


# ---------------------------------------------------------------------------
# norms and inner products


@dataclass(frozen=True)
class Quadrature:
    radius: float = 300.0
    step: float = 2e-3

    def nodes(self, step: float | None = None) -> np.ndarray:
        h = self.step if step is None else step
        n = int(round(2 * self.radius / h))
        return np.linspace(-self.radius, self.radius, n + 1)


def _tail_bound(k: GaussianKernel, lo: float, hi: float, radius: float) -> float:
    """Bound on the L2 norm of (K 1_[lo,hi]) outside [-R, R].

    The y-phase derivative ``b x + 2 c y`` exceeds ``lam = |b| x - 2|c| ymax``
    there, and a monotone phase gives |integral| <= 2 / lam.
    """
    ymax = max(abs(lo), abs(hi))
    r_eff = radius - 2 * abs(k.c) * ymax / abs(k.b)
    if r_eff <= 0:
        return math.inf
    return math.sqrt(2 * 4 * abs(k.amp) ** 2 / (k.b**2 * r_eff))


def l2_difference(k1: GaussianKernel, k2: GaussianKernel, y, r: int, quad: Quadrature) -> tuple[float, float]:
    """||(K1 - K2) phi_{y,r}|| on the quadrature window, with an error budget."""
    lo, hi = float(y) - 1.0 / r, float(y) + 1.0 / r

    def norm(step):
        x = quad.nodes(step)
        d = k1.apply_step(x, lo, hi) - k2.apply_step(x, lo, hi)
        return math.sqrt(integrate.trapezoid(np.abs(d) ** 2, x))

    same = (k1 == k2)
    if same:
        return 0.0, 0.0
    fine = norm(quad.step)
    coarse = norm(2 * quad.step)
    tail = _tail_bound(k1, lo, hi, quad.radius) + _tail_bound(k2, lo, hi, quad.radius)
    budget = abs(fine - coarse) + tail
    return fine, budget


def kernel_matrix_element(k: GaussianKernel, yi, ri: int, yj, rj: int) -> complex:
    """<phi_{yi,ri}| K |phi_{yj,rj}> by adaptive quadrature of the closed form."""
    lo_j, hi_j = float(yj) - 1.0 / rj, float(yj) + 1.0 / rj
    a, b = float(yi) - 1.0 / ri, float(yi) + 1.0 / ri

    def part(fn):
        return integrate.quad(lambda x: fn(k.apply_step(x, lo_j, hi_j)), a, b,
                              epsabs=1e-12, epsrel=1e-11, limit=200)[0]

    return complex(part(np.real), part(np.imag))


# ---------------------------------------------------------------------------
# the tau / delta search


@dataclass
class ScheduleConfig:
    units: UnitSystem
    potential: Potential
    sqrt_ns: Sequence[int]  # sqrt(N_k) for k = 1, 2, ...
    quadrature: Quadrature = field(default_factory=Quadrature)
    vector_cap: int = 2**22
    enumeration: PsiEnumeration = field(default_factory=PsiEnumeration)

    def sqrt_n(self, k: int) -> int:
        if not 1 <= k <= len(self.sqrt_ns):
            raise IndexError(f"no lattice for level {k}")
        return self.sqrt_ns[k - 1]


def _lattice_element(cfg: ScheduleConfig, k: int, s_prime: int, psi: list) -> np.ndarray:
    """Matrix of <F_k psi_i | L^t_{k-delta_s'} | F_k psi_j> over the family."""
    sqrt_n = cfg.sqrt_n(k)
    g = Grid(sqrt_n)
    cols = np.stack([embed_step(y, r, g).amplitudes for y, r in psi], axis=1)
    # The lifted operator carries its own normalization (about 2 / 4**s' times
    # the coarse one once a potential breaks the free spiking), so it is not
    # swapped for the coarse Trotter product when H^d_k is too large.
    if 4**s_prime * g.n > cfg.vector_cap:
        raise ResourceCapError(f"H^d_k of dimension {4**s_prime * g.n} exceeds vector cap {cfg.vector_cap}")
    out = lifted_trotter(cols, s_prime, cfg.potential, sqrt_n, cfg.units)
    return cols.conj().T @ out


def tau_delta(k: int, cfg: ScheduleConfig) -> tuple[int, int, dict]:
    """Return ``(tau(k), delta(k), witness report)``."""
    ref = reference_kernel(cfg.potential, cfg.units)
    psi_all = cfg.enumeration.first(k + 1)
    exact_ip = np.array([[kernel_matrix_element(ref, yi, ri, yj, rj) for yj, rj in psi_all]
                         for yi, ri in psi_all])
    cond_i: dict = {}
    cond_ii: dict = {}
    lattice_cache: dict = {}
    candidates = []
    for s_prime in range(1, k + 1):
        trot = continuum_trotter_kernel(cfg.potential, cfg.units, 4**s_prime)
        cond_i[s_prime] = [l2_difference(ref, trot, y, r, cfg.quadrature) for y, r in psi_all]
        lattice_cache[s_prime] = _lattice_element(cfg, k, s_prime, psi_all)
        cond_ii[s_prime] = np.abs(exact_ip - lattice_cache[s_prime])

    best = None
    for s in range(k, 0, -1):
        for s_prime in range(s, k + 1):
            dev_i = max(v for v, _ in cond_i[s_prime][: s + 1])
            bud_i = max(b for _, b in cond_i[s_prime][: s + 1])
            dev_ii = float(cond_ii[s_prime][: s + 1, : s + 1].max())
            ok = dev_i < 1.0 / s and dev_ii < 1.0 / s
            candidates.append({"s": s, "s_prime": s_prime, "cond_i": dev_i, "cond_i_budget": bud_i,
                               "cond_ii": dev_ii, "threshold": 1.0 / s, "accepted": ok})
            if ok and best is None:
                best = (s, s_prime)
                break
        if best is not None:
            break
    tau, dk = best if best is not None else (1, 1)
    report = {
        "k": k,
        "tau": tau,
        "delta": dk,
        "fallback": best is None,
        "psi": [[str(y), r] for y, r in psi_all],
        "candidates": candidates,
        "quadrature": {"radius": cfg.quadrature.radius, "step": cfg.quadrature.step},
        "_exact_ip": exact_ip,
        "_lattice": lattice_cache,
    }
    return tau, dk, report


def consequence_bound(i: int, j: int, k: int, result: tuple[int, int, dict]) -> dict:
    """|<psi_i|K^t psi_j> - <F_k psi_i|L^t_{k-delta}|F_k psi_j>| against 2/tau(k)."""
    tau, dk, report = result
    if i > tau or j > tau:
        raise ValueError(f"indices must not exceed tau(k) = {tau}")
    dev = abs(report["_exact_ip"][i, j] - report["_lattice"][dk][i, j])
    return {"i": i, "j": j, "k": k, "deviation": float(dev), "bound": 2.0 / tau, "holds": dev < 2.0 / tau}


def public_report(report: dict) -> dict:
    """The JSON-serializable part of a witness report."""
    return {key: v for key, v in report.items() if not key.startswith("_")}
