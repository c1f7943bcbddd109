"""Free propagation on a finite lattice.

1. The kinetic matrix on H_N is sparse: with th/m = 2 only even index gaps
   survive, and there it is 2 N^-1/2 times the continuum kernel.
2. Rescaled by sqrt(N)/2 a surviving entry is the continuum kernel exactly,
   for every lattice size.
3. Smoothing the endpoints with step functions of width 2/p turns the
   lattice matrix element into a kernel estimate that improves with p.
"""

from fractions import Fraction

import numpy as np

from lfi.kernels import extract_propagator_window, free_kernel_continuum, free_kernel_lattice_matrix, free_propagator_direct
from lfi.lattice import Grid
from lfi.operators import EvolutionFactor, apply_kinetic, dense_matrix
from lfi.units import make_units

u = make_units(Fraction(1, 2), 4)

g = Grid(6)
mat = dense_matrix(EvolutionFactor("kinetic", g, u))
print("column 0 of the kinetic matrix, N = 36 (moduli):")
print(np.round(np.abs(mat[:12, 0]), 4))
print("max deviation from the closed form:", np.abs(mat - free_kernel_lattice_matrix(g, u)).max())

print("\nrescaled entries for y0 = 0, y1 = 1:")
for sq in (6, 12, 60, 300):
    v = free_propagator_direct(0, 1, Grid(sq), u)
    print(f"  sqrt(N) = {sq:4d}: {v.value:.15f}")
print(f"  continuum        : {free_kernel_continuum(0, 1, u):.15f}")

print("\nwindowed estimate at y0 = y1 = 0, sqrt(N) = 900:")
g = Grid(900)
ref = free_kernel_continuum(0, 0, u)
for p in (2, 4, 8, 16):
    val = extract_propagator_window(0, 0, p, lambda a: apply_kinetic(a, 1, g, u), g)
    print(f"  p = {p:2d}: relative error {abs(val - ref) / abs(ref):.3%}")
