"""
Interfaces as graphs and as curves
==================================

"""

import numpy as np

from twophase import (ArcCurve, GraphInterface, TubularMap, chord_arc_constant, curvature,
                      curvature_identity_check, tubular_map_check)
from twophase.generators import random_overhang

# a graph interface is sampled on the uniform grid of [0, 2 pi)
g = GraphInterface.from_function(lambda x: 0.4 * np.cos(x), 256)
print("graph:", g, "slope", round(g.slope_inf(), 3))

# curvature is signed so that a crest curves downward
print("curvature at the crest", curvature(g)[0])

# the interface identity relating curvature, area and the vertical normal
chk = curvature_identity_check(g)
print(f"identity: lhs {chk.lhs:.15f}  rhs {chk.rhs:.15f}  residual {chk.residual:.1e}")

# the same interface parametrised by arc length
c = ArcCurve.from_graph(g)
print("as a curve: length", round(c.length, 6), "speed error", c.speed_error())

# an interface that folds back over itself is still a valid curve
ov = random_overhang(seed=4)
print("overhang: min alpha_s", round(ov.alpha_s.min(), 3), "chord-arc", round(chord_arc_constant(ov), 3))
print("identity residual on the overhang", curvature_identity_check(ov).residual)

# normal coordinates near a circle: fine at R/2, broken at 2R
R = 0.5
circle = ArcCurve.circle(R, n=128)
for eps in (R / 2, 2 * R):
    rep = tubular_map_check(TubularMap(circle, eps), raise_on_failure=False)
    print(f"circle, eps = {eps}: jacobian [{rep.min_jacobian:.2f}, {rep.max_jacobian:.2f}], "
          f"injective {rep.injective}")
