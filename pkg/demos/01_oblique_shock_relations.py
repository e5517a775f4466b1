"""
Exact oblique-shock relations
=============================

Every steady test case starts from the Rankine-Hugoniot jump across a
straight oblique shock.  This script prints the jump ratios for the
reference shock and the table of upstream Mach numbers that reproduce the
same three pressure ratios at shock angles of 30, 40 and 50 degrees.
"""

import numpy as np

from tcfv.gasdyn import ShockSpec, oblique_shock_exact
from tcfv.harness import pressure_ratio_table

# Reference shock: M = 3 at 30 degrees.
s = oblique_shock_exact(3.0, 30.0)
print(f"M=3, beta=30: p2/p1 = {s.pressure_ratio:.8f}, rho2/rho1 = {s.density_ratio:.7f}, "
      f"deflection = {s.deflection:.2f} deg, M2 = {s.downstream_mach:.4f}")

# Each angle meets each pressure ratio once.
print("\n beta   PR_k        Mach         p2/p1")
for beta, k, mach, pr in pressure_ratio_table():
    print(f" {beta:4.0f}   PR{k}   {mach:12.8f}  {pr:12.8f}")

# Placing the shock in the plane.  The aligned case rotates the flow so
# that the shock is the vertical line x = 0.5.
spec = ShockSpec.through((0.5, 0.5), 3.0, 30.0, 60.0, ((0, 1), (0, 1)))
w1, w2 = spec.states()
print("\naligned setup: shock from", spec.p1, "to", spec.p2)
print("  upstream   (rho, u, v, p) =", np.round(w1, 5))
print("  downstream (rho, u, v, p) =", np.round(w2, 5))
