"""Kinetic and potential evolution factors, Trotter products and dense oracles.

Times are passed as fractions of the total time t (``frac = tau / t``).
A grid built with ``Grid.refined(sqrt_n_k, delta)`` is treated as the scaled
space H^d: Planck's constant becomes ``4**delta * h`` and the potential
``4**delta * f_v(x / 2**delta)``, where x is the value in the refined grid's
own units.

With th/m = 2 the kinetic phase on momentum index m is
``exp(-2 pi i frac * hs * m_w**2 / N)``, with ``hs = 4**delta`` and ``m_w``
the wrapped index.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.fft as sfft
import scipy.linalg as sla

from .hilbert import StateVector
from .lattice import Grid
from .potentials import Potential
from .units import UnitSystem

DEFAULT_DENSE_CAP = 4096


class ResourceCapError(RuntimeError):
    pass


def dense_cap() -> int:
    return int(os.environ.get("LFI_DENSE_CAP", DEFAULT_DENSE_CAP))


_WORKERS = 1


def set_workers(n: int):
    """Thread count handed to the FFT backend."""
    global _WORKERS
    _WORKERS = max(1, int(n))


def _as_array(psi):
    if isinstance(psi, StateVector):
        return psi.amplitudes, True
    return np.asarray(psi, dtype=np.complex128), False


def _wrap(out, was_state):
    return StateVector(out) if was_state else out


def _frac(tau) -> Fraction:
    tau = Fraction(tau)
    if tau < 0:
        raise ValueError(f"time fraction must be non-negative, got {tau}")
    return tau


def kinetic_phases(g: Grid, frac, scaled: bool = True) -> np.ndarray:
    """Diagonal of the kinetic factor in the DFT basis."""
    hs = 4**g.delta if scaled else 1
    m = g.wrapped()
    # reduce the exponent modulo 1 in integers before multiplying by 2 pi
    q = Fraction(frac) * hs
    d = q.denominator * g.n
    c = q.numerator % d
    if c * d < 2**62:
        num = (np.mod(m * m, d) * c) % d
    else:
        num = np.array([(int(v) * int(v) * c) % d for v in m], dtype=np.float64)
    return np.exp(-2j * np.pi * num / d)


def potential_phases(g: Grid, frac, f_v: Potential, u: UnitSystem, scaled: bool = True) -> np.ndarray:
    """Diagonal of the potential factor in the position basis."""
    frac = Fraction(frac)
    if f_v.is_free:
        return np.ones(g.n, dtype=np.complex128)
    x_d = g.wrapped() / g.sqrt_n
    if scaled and g.delta:
        hs = 4**g.delta
        v_eff = hs * np.asarray(f_v(x_d / 2**g.delta), dtype=float)
        hbar_eff = hs * u.hbar
    else:
        v_eff = np.asarray(f_v(x_d), dtype=float)
        hbar_eff = u.hbar
    return np.exp(-1j * float(frac) * u.t * v_eff / hbar_eff)


def _kinetic_array(a: np.ndarray, phases: np.ndarray) -> np.ndarray:
    shape = (-1,) + (1,) * (a.ndim - 1)
    f = sfft.fft(a, axis=0, norm="ortho", workers=_WORKERS)
    f *= phases.reshape(shape)
    return sfft.ifft(f, axis=0, norm="ortho", workers=_WORKERS, overwrite_x=True)


def _diag_array(a: np.ndarray, phases: np.ndarray) -> np.ndarray:
    shape = (-1,) + (1,) * (a.ndim - 1)
    return a * phases.reshape(shape)


def apply_kinetic(psi, tau, g: Grid, u: UnitSystem | None = None, scaled: bool = True):
    """exp(-i tau P**2 / 2 m hbar) via DFT, phase multiply, inverse DFT.

    Parameters
    ----------
    psi : StateVector or ndarray
        A vector, or an ``(N, B)`` block of column vectors.
    tau : rational
        Time as a fraction of t.
    """
    a, st = _as_array(psi)
    return _wrap(_kinetic_array(a, kinetic_phases(g, _frac(tau), scaled)), st)


def apply_potential(psi, tau, f_v: Potential, g: Grid, u: UnitSystem, scaled: bool = True):
    """exp(-i tau V / hbar), diagonal in the position basis."""
    a, st = _as_array(psi)
    return _wrap(_diag_array(a, potential_phases(g, _frac(tau), f_v, u, scaled)), st)


def trotter_power(psi, r: int, delta_k: int, f_v: Potential, g: Grid, u: UnitSystem,
                  scaled: bool = True):
    """Apply ``(K(dt) V(dt))**r`` with ``dt = t / 4**delta_k``.

    Within each step the potential acts first, then the kinetic factor.
    """
    n_star = 4**delta_k
    if not 1 <= r <= n_star:
        raise ValueError(f"r must be in 1..{n_star}, got {r}")
    a, st = _as_array(psi)
    frac = Fraction(1, n_star)
    kp = kinetic_phases(g, frac, scaled)
    if f_v.is_free:
        # the kinetic factors commute, so r steps collapse into one
        out = _kinetic_array(a, kinetic_phases(g, frac * r, scaled))
        return _wrap(out, st)
    vp = potential_phases(g, frac, f_v, u, scaled)
    out = a
    for _ in range(r):
        out = _kinetic_array(_diag_array(out, vp), kp)
    return _wrap(out, st)


def gk_embed(psi_k: np.ndarray, delta_k: int) -> np.ndarray:
    """G_k: u(n) in H_k goes to u(4**delta_k n) in H^d_k."""
    a, _ = _as_array(psi_k)
    f = 4**delta_k
    out = np.zeros((a.shape[0] * f,) + a.shape[1:], dtype=np.complex128)
    out[::f] = a
    return out


def gk_restrict(psi_d: np.ndarray, delta_k: int) -> np.ndarray:
    """Adjoint of G_k: read off the components on rng(G_k)."""
    a, _ = _as_array(psi_d)
    return a[:: 4**delta_k].copy()


def lifted_trotter(psi_k, delta_k: int, f_v: Potential, sqrt_n_k: int, u: UnitSystem, r: int | None = None):
    """L^{r dt}_{k-delta} seen from H_k: embed by G_k, evolve in H^d_k, restrict.

    ``r`` defaults to the full time ``4**delta_k`` steps.
    """
    a, st = _as_array(psi_k)
    gd = Grid.refined(sqrt_n_k, delta_k)
    r = 4**delta_k if r is None else r
    out = gk_restrict(trotter_power(gk_embed(a, delta_k), r, delta_k, f_v, gd, u), delta_k)
    return _wrap(out, st)


@dataclass(frozen=True)
class EvolutionFactor:
    """A unitary on H_N described by what it does, applied lazily.

    ``kind`` is one of ``identity``, ``kinetic``, ``potential``, ``trotter``
    or ``exact``. For ``trotter`` the factor is ``steps`` Trotter steps of
    length ``t / 4**delta_k``; ``frac`` is unused.
    """

    kind: str
    grid: Grid
    units: UnitSystem | None = None
    frac: Fraction = Fraction(1)
    potential: Potential | None = None
    delta_k: int = 0
    steps: int = 1
    scaled: bool = True

    def apply(self, psi):
        if self.kind == "identity":
            a, st = _as_array(psi)
            return _wrap(a.copy(), st)
        if self.kind == "kinetic":
            return apply_kinetic(psi, self.frac, self.grid, self.units, self.scaled)
        if self.kind == "potential":
            return apply_potential(psi, self.frac, self.potential, self.grid, self.units, self.scaled)
        if self.kind == "trotter":
            return trotter_power(psi, self.steps, self.delta_k, self.potential, self.grid,
                                 self.units, self.scaled)
        if self.kind == "exact":
            return exact_evolution_oracle(psi, self.frac, self.potential, self.grid, self.units,
                                          self.scaled)
        raise ValueError(f"unknown factor kind {self.kind!r}")

    __call__ = apply


def dense_matrix(factor, n: int | None = None, block: int = 512) -> np.ndarray:
    """Matrix whose column j is the factor applied to u(j).

    ``factor`` is an EvolutionFactor or any callable acting on ``(N, B)``
    column blocks, in which case ``n`` must be given.
    """
    if isinstance(factor, EvolutionFactor):
        n = factor.grid.n
    if n is None:
        raise ValueError("dimension required for a bare callable")
    cap = dense_cap()
    if n > cap:
        raise ResourceCapError(f"dense matrix of dimension {n} exceeds cap {cap} (LFI_DENSE_CAP)")
    out = np.empty((n, n), dtype=np.complex128)
    for j0 in range(0, n, block):
        j1 = min(n, j0 + block)
        cols = np.zeros((n, j1 - j0), dtype=np.complex128)
        cols[np.arange(j0, j1), np.arange(j1 - j0)] = 1.0
        out[:, j0:j1] = factor(cols)
    return out


def hamiltonian_generator(g: Grid, f_v: Potential, u: UnitSystem, scaled: bool = True) -> np.ndarray:
    """Hermitian A with ``exp(-i frac A)`` the evolution over ``frac * t``."""
    n = g.n
    cap = dense_cap()
    if n > cap:
        raise ResourceCapError(f"dimension {n} exceeds dense cap {cap}")
    hs = 4**g.delta if scaled else 1
    m = g.wrapped().astype(np.float64)
    theta = 2 * np.pi * hs * m * m / n
    f = sfft.fft(np.eye(n), axis=0, norm="ortho")
    a = f.conj().T @ (theta[:, None] * f)
    if not f_v.is_free:
        a[np.diag_indices(n)] += _potential_angles(g, f_v, u, scaled)
    return a


def _potential_angles(g: Grid, f_v: Potential, u: UnitSystem, scaled: bool) -> np.ndarray:
    x_d = g.wrapped() / g.sqrt_n
    if scaled and g.delta:
        return u.t * np.asarray(f_v(x_d / 2**g.delta), dtype=float) / u.hbar
    return u.t * np.asarray(f_v(x_d), dtype=float) / u.hbar


def exact_evolution_oracle(psi, frac, f_v: Potential, g: Grid, u: UnitSystem, scaled: bool = True):
    """exp(-i frac t H / hbar) with H = P**2/2m + V, by Hermitian eigendecomposition."""
    a, st = _as_array(psi)
    gen = hamiltonian_generator(g, f_v, u, scaled)
    resid = np.abs(gen - gen.conj().T).max()
    if resid > 1e-9:
        raise ArithmeticError(f"generator is not Hermitian (residual {resid:.2e})")
    w, v = sla.eigh((gen + gen.conj().T) / 2)
    out = v @ (np.exp(-1j * float(Fraction(frac)) * w)[:, None] * (v.conj().T @ a.reshape(g.n, -1)))
    return _wrap(out.reshape(a.shape), st)


def gk_conjugation_error(sqrt_n_k: int, delta_k: int, n_split: int, f_v: Potential,
                         u: UnitSystem) -> dict:
    """Compare L^{t/n} on H_k with its counterpart on H^d_k restricted to rng(G_k).

    Returns the largest entrywise difference on rng(G_k) and the largest
    amplitude the H^d_k operator sends outside rng(G_k).
    """
    gk = Grid(sqrt_n_k)
    gd = Grid.refined(sqrt_n_k, delta_k)
    frac = Fraction(1, n_split)

    def step(g):
        def op(cols):
            return apply_kinetic(apply_potential(cols, frac, f_v, g, u), frac, g, u)
        return op

    uk = dense_matrix(step(gk), gk.n)
    ud = dense_matrix(step(gd), gd.n)
    idx = np.arange(gk.n) * 4**delta_k
    on = ud[np.ix_(idx, idx)]
    off_rows = np.setdiff1d(np.arange(gd.n), idx)
    return {
        "max_entry_error": float(np.abs(on - uk).max()),
        "range_leakage": float(np.abs(ud[np.ix_(off_rows, idx)]).max()),
    }


def unitarity_defect(factor, psi) -> float:
    a, _ = _as_array(psi)
    out, _ = _as_array(factor(a))
    return abs(np.linalg.norm(out) / np.linalg.norm(a) - 1.0)
