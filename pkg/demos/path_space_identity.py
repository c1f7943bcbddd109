"""The path-space Riemann sum and the operator it reproduces.

Paths are sampled at n* + 1 times; interior points live on the even
sublattice of the refined grid. Summing exp(i S / hbar) against mu* over the
paths whose endpoints fall in two windows gives, level by level, the same
number as the Trotter product evolved on the refined lattice between G_k
images (the lifted route). Without a potential this also equals the Trotter
product on the coarse lattice itself (the direct route). With a potential the
direct route differs, because the potential breaks the sparse spiking of the
refined kinetic step.
"""

from fractions import Fraction

from lfi.pathspace import BasicOpenSet, PathSpace, exact_mu_sum, path_space_estimate
from lfi.potentials import HarmonicPotential, free
from lfi.units import DeltaSchedule, LatticeSequence, make_units

u = make_units(Fraction(1, 2), 4)
space = PathSpace(LatticeSequence((6, 12)), DeltaSchedule.constant(1, 3), u)

cell = BasicOpenSet(1, (0, 2, -3, 5, 1))
kids = list(space.cells_at(cell, 2))
print(f"a level-1 cell splits into {len(kids)} level-2 cells")
for r in space.levels:
    print(f"  mu*(cell)({r}) = sqrt2 * {space.mu_star(cell, r)}; children sum to sqrt2 * {exact_mu_sum(space, kids, r)}")

for name, f_v in (("free", free()), ("harmonic", HarmonicPotential(omega_t=Fraction(1, 2), units=u))):
    print(f"\n{name}: path sum against operator side, y0 = 0, y1 = 1/3, r = 2")
    lifted = path_space_estimate(space, 0, Fraction(1, 3), 2, f_v, route="lifted")
    direct = path_space_estimate(space, 0, Fraction(1, 3), 2, f_v, route="direct")
    for a, b in zip(lifted, direct):
        print(f"  k = {a.k}: path sum {a.estimate:.12f}, lifted {a.operator_side:.12f}, direct {b.operator_side:.12f}")
