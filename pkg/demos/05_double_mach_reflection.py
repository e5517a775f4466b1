"""
Double Mach reflection with a moving troubled-cell mask
=======================================================

A Mach 10 shock meets a wall at 60 degrees.  The indicator is re-evaluated
at the start of every time step; on the first step the cells of the
optimal geometric configuration are added so that the initial
discontinuity is limited from the start.

Usage: python 05_double_mach_reflection.py [aligned|nonaligned] [ny] [t_final]
"""

import sys

from tcfv.gasdyn import cons_to_prim, prim_to_cons
from tcfv.harness import RunConfig, build_case
from tcfv.marching import advance

variant = sys.argv[1] if len(sys.argv) > 1 else "nonaligned"
ny = int(sys.argv[2]) if len(sys.argv) > 2 else 24
t_final = float(sys.argv[3]) if len(sys.argv) > 3 else 0.05
nx = 4 * ny if variant == "nonaligned" else 24 * max(1, round(4 * ny / 24))

case = build_case(RunConfig(f"dmr-{variant}", nx=nx, ny=ny, t_final=t_final))
print(f"dmr-{variant}: {nx}x{ny} cells to t = {t_final}")

flagged = []


def mask(step, q, t):
    flags = case.mask_provider(step, q, t)
    flagged.append(flags.mean())
    return flags


res = advance(case.disc, prim_to_cons(case.w0), t_final, mask, case.settings)
w = cons_to_prim(res.q)

print(f"{res.steps} steps; limited fraction of cells: first step {flagged[0]:.3f}, "
      f"last step {flagged[-1]:.3f}, max {max(flagged):.3f}")
print(f"density range {w[..., 0].min():.3f} .. {w[..., 0].max():.3f}, "
      f"pressure range {w[..., 3].min():.3f} .. {w[..., 3].max():.3f}")
