"""
Energies of a two-layer state
=============================

"""

import numpy as np

from twophase import (GraphInterface, LayerField, PhysicalParams, energies, energy_condition,
                      rs_nonnegativity_check)
from twophase.generators import random_field

# heavy fluid below, light fluid above, walls at distance 1.5
p = PhysicalParams(rho_plus=2, rho_minus=1, sigma=0.1, H_plus=1.5, H_minus=1.5)
print(p, "atwood", p.atwood)

g = GraphInterface.from_function(lambda x: 0.2 * np.cos(x) + 0.05 * np.sin(3 * x), 256)

# potentials in each layer, given by their coefficients on the flat line
rng = np.random.default_rng(0)
fields = tuple(random_field(lay, rng, 256, kmax=4).with_interface(g) for lay in p.layers)
traces = tuple(f.trace_on(g) for f in fields)

rec = energies(g, traces, p, fields=fields)
for name in ("M", "E_k", "E_p", "E", "Etilde_k", "R_b_plus", "R_b_minus", "R_s", "I"):
    print(f"{name:>10} {getattr(rec, name): .10f}")

# the virial right-hand side and the sign condition on the total energy
print("virial rhs", rec.virial_rhs)
# positive energy with surface tension falls outside the growth results ("open")
print("energy condition:", energy_condition(rec.E, p.sigma))

# the surface remainder is non-negative; the chain behind it is tight only when flat
for shape in (GraphInterface.flat(256), g):
    ch = rs_nonnegativity_check(shape, p)
    print(f"chain {ch.first:.6f} >= {ch.second:.6f} >= {ch.third:.6f}  R_s = {ch.R_s:.3e}")
