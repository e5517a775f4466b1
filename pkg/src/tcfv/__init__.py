"""Finite-volume Euler solver with shock-localized slope limiting."""

from .errors import (ConfigurationError, ContractError, DivergedSolutionError,
                     InvalidStateError, NoShockError)
from .gasdyn import (GAMMA, ShockSpec, cons_to_prim, isentropic_vortex_state,
                     oblique_shock_exact, prim_to_cons, shock_field)
from .mesh import (StructuredMesh, build_ramp_mesh, build_sheared_mesh,
                   build_uniform_mesh)
from .recon import TroubleMask, muscl_faces, slope_limiter_phi
from .flux import ausm_plus, lax_friedrichs
from .boundary import (BoundaryClosure, Dirichlet, Extrapolate, Periodic,
                       SlipWall, Split)
from .marching import (Discretization, MarchSettings, advance, assemble_residual,
                       march_to_steady, residual_norm, tvd_rk3_step)

__version__ = "0.1.0"

__all__ = [
    "GAMMA", "BoundaryClosure", "ConfigurationError", "ContractError", "Dirichlet",
    "Discretization", "DivergedSolutionError", "Extrapolate", "InvalidStateError",
    "MarchSettings", "NoShockError", "Periodic", "ShockSpec", "SlipWall", "Split",
    "StructuredMesh", "TroubleMask", "advance", "assemble_residual", "ausm_plus",
    "build_ramp_mesh", "build_sheared_mesh", "build_uniform_mesh", "cons_to_prim",
    "isentropic_vortex_state", "lax_friedrichs", "march_to_steady", "muscl_faces",
    "oblique_shock_exact", "prim_to_cons", "residual_norm", "shock_field",
    "slope_limiter_phi", "tvd_rk3_step",
]
