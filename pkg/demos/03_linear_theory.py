"""
Linear theory about the flat interface
======================================

"""

import numpy as np

from twophase import (PhysicalParams, dispersion, growth_rate, kelvin_criterion,
                      linearized_mode)
from twophase.linear import critical_sigma, dispersion_mismatch

# heavy fluid on top: every mode grows without surface tension
rt = PhysicalParams(rho_plus=1, rho_minus=2)
print("growth rate k=1:", float(growth_rate(1, rt)), "expected", np.sqrt(1 / 3))

# surface tension stabilises short waves first
k = np.arange(1, 9)
for sigma in (0.0, 0.05, 0.2):
    p = PhysicalParams(1, 2, sigma=sigma)
    print(f"sigma {sigma}: omega^2 =", np.round(dispersion(k, p), 4))
print("neutral sigma for k = 3:", critical_sigma(3, rt))

# the closed form agrees with finite differences of the nonlinear right-hand side
m = linearized_mode(2, PhysicalParams(2, 1, H_plus=1.0, H_minus=1.0))
print("k = 2 coupling", m.coupling, "restoring", m.restoring)
print("worst mismatch k = 1..8:", dispersion_mismatch(k, PhysicalParams(1, 2, sigma=0.1)))

# shear with surface tension and stable stratification
shear = PhysicalParams(2, 1, sigma=1.0)
for jump in (0.0, 1.0, 2.0):
    r = kelvin_criterion(shear, jump)
    print(f"velocity jump {jump}: margin {r.margin:+.4f}", "stable" if r.stable else "unstable")
