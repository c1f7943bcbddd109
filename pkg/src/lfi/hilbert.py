"""State vectors on H_N, the F_N sampling embedding and step functions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .lattice import Grid, window_indices


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over the basis u(0), ..., u(N-1)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=np.complex128, copy=True)
        if a.ndim != 1:
            raise ValueError("amplitudes must be one-dimensional")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes contain NaN or Inf")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_dims(self, other)
        return StateVector(self.amplitudes + other.amplitudes)

    def __rmul__(self, c) -> "StateVector":
        return StateVector(c * self.amplitudes)

    def __getitem__(self, idx):
        return self.amplitudes[idx]


def _check_dims(a: StateVector, b: StateVector):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")


def basis(n: int, idx: int) -> StateVector:
    v = np.zeros(n, dtype=np.complex128)
    v[idx] = 1.0
    return StateVector(v)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_dims(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def embed_function(f: Callable, g: Grid) -> StateVector:
    """Sample ``f`` on the grid with weight N^(-1/4).

    ``f`` is called once with the float array of grid values; scalar-only
    callables are vectorized as a fallback.
    """
    x = g.values()
    try:
        vals = np.asarray(f(x), dtype=np.complex128)
        if vals.shape != x.shape:
            vals = np.broadcast_to(vals, x.shape)
    except (TypeError, ValueError):
        vals = np.array([f(v) for v in x], dtype=np.complex128)
    return StateVector(vals * g.n ** -0.25)


class StepFunction:
    """Indicator of ``[y - 1/p, y + 1/p)``."""

    def __init__(self, y, p: int):
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
        self.y = Fraction(y)
        self.p = int(p)
        self.lo = float(self.y - Fraction(1, p))
        self.hi = float(self.y + Fraction(1, p))

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return 1.0 if self.y - Fraction(1, self.p) <= x < self.y + Fraction(1, self.p) else 0.0
        x = np.asarray(x, dtype=float)
        out = ((x >= self.lo) & (x < self.hi)).astype(float)
        return out if out.ndim else float(out)

    def __repr__(self):
        return f"StepFunction(y={self.y}, p={self.p})"


def step_function(y, p: int) -> StepFunction:
    """phi_{y,p}, the indicator of the half-open interval around ``y``.

    >>> step_function(0, 1)(1)
    0.0
    """
    return StepFunction(y, p)


def embed_step(y, p: int, g: Grid) -> StateVector:
    """F_N(phi_{y,p}) built from the exact window, free of float edge effects."""
    v = np.zeros(g.n, dtype=np.complex128)
    v[window_indices(g, y, p)] = g.n ** -0.25
    return StateVector(v)
