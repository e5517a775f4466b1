"""
Order of accuracy on the isentropic vortex
==========================================

A vortex convected through a periodic box returns to its starting point
every 10 time units.  The density error after a short time on a sequence
of grids gives the observed order of the unlimited k = 1/3 scheme with
third-order Runge-Kutta in time.

The full check (t = 20 on 100^2 and 200^2 grids, several minutes) is
``tcfv validate-vortex``.
"""

import sys

from tcfv.harness import RunConfig, run
from tcfv.metrics import order_of_accuracy

t_final = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
grids = (25, 50, 100)

prev = None
print(f"t = {t_final}")
print(f"{'grid':>8} {'L2':>10} {'order':>6} {'Linf':>10} {'order':>6}")
for n in grids:
    res = run(RunConfig("isentropic-vortex", nx=n, ny=n, t_final=t_final))
    l2, linf = res.field_norms
    h = 10.0 / n
    if prev:
        o2 = order_of_accuracy(prev[1], l2, prev[0], h)
        oi = order_of_accuracy(prev[2], linf, prev[0], h)
        print(f"{n:4d}^2   {l2:10.3e} {o2:6.2f} {linf:10.3e} {oi:6.2f}")
    else:
        print(f"{n:4d}^2   {l2:10.3e} {'-':>6} {linf:10.3e} {'-':>6}")
    prev = (h, l2, linf)
