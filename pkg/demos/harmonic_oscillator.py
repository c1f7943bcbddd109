"""Trotter evolution of the harmonic oscillator against the Mehler kernel.

The coarse lattice runs 4**s split steps of length t / 4**s; the windowed
matrix element approaches the Mehler kernel as s grows. The same Trotter
schedule evolved on the refined lattice and read back through G_k carries a
different normalization once the potential breaks the free spiking: there
the result is about 2 / 4**s times the coarse one.
"""

from fractions import Fraction

import numpy as np

from lfi.hilbert import embed_step
from lfi.kernels import extract_propagator_window, mehler_kernel
from lfi.lattice import Grid
from lfi.operators import lifted_trotter, trotter_power
from lfi.potentials import HarmonicPotential
from lfi.units import make_units

u = make_units(Fraction(1, 2), 4)
osc = HarmonicPotential(omega_t=Fraction(1, 2), units=u)
w = osc.omega(u)
y0, y1, p = Fraction(0), Fraction(1, 2), 8
ref = mehler_kernel(float(y0), float(y1), w, u)

g = Grid(900)
print("coarse Trotter, sqrt(N) = 900, p = 8:")
for s in (1, 2, 3):
    val = extract_propagator_window(y0, y1, p, lambda a, s=s: trotter_power(a, 4**s, s, osc, g, u), g)
    print(f"  s = {s}: {val:.6f}, relative error {abs(val - ref) / abs(ref):.3%}")
print(f"  Mehler: {ref:.6f}")

g = Grid(900)
a = embed_step(y0, p, g).amplitudes
b = embed_step(y1, p, g).amplitudes
print("\nlifted over coarse matrix element, sqrt(N) = 900 (small lattices add a cutoff error on top):")
for s in (1, 2):
    lifted = np.vdot(b, lifted_trotter(a, s, osc, g.sqrt_n, u))
    coarse = np.vdot(b, trotter_power(a, 4**s, s, osc, g, u))
    print(f"  s = {s}: ratio {lifted / coarse:.3f}  (2 / 4**s = {2 / 4**s:.3f})")
