"""Boundary closures: ghost-state synthesis for the four mesh edges.

The residual needs two ghost layers per edge so that the one-sided state
belonging to the first ghost cell can be reconstructed with a full stencil.
Ghost layer ``k`` (``k = 1`` adjacent to the boundary) has a notional center
``c_0 + k (c_0 - c_1)``, extrapolated from the first two interior centers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError

EDGES = ("west", "east", "south", "north")
NGHOST = 2


class EdgeCondition:
    """Base class.  ``ghosts`` returns the two ghost layers for one edge.

    ``interior`` has shape ``(2, m, 4)``: layer 0 touches the boundary.
    The result has the same shape, layer 0 being the ghost next to the
    boundary.
    """

    def ghosts(self, interior, edge_data, t):
        raise NotImplementedError


@dataclass(frozen=True)
class Extrapolate(EdgeCondition):
    """Zero-gradient (supersonic outflow) condition."""

    def ghosts(self, interior, edge_data, t):
        return np.repeat(interior[:1], NGHOST, axis=0)


@dataclass(frozen=True)
class Dirichlet(EdgeCondition):
    """Prescribed state, e.g. supersonic inflow from an exact solution.

    ``state`` is either a constant primitive 4-vector or a callable
    ``state(points, t) -> primitive`` evaluated at ghost centers.
    """

    state: object

    def ghosts(self, interior, edge_data, t):
        if callable(self.state):
            return np.asarray(self.state(edge_data.ghost_centers, t), dtype=float)
        return np.broadcast_to(np.asarray(self.state, dtype=float),
                               interior.shape).copy()


@dataclass(frozen=True)
class SlipWall(EdgeCondition):
    """Inviscid wall: mirror the normal velocity, copy everything else."""

    def ghosts(self, interior, edge_data, t):
        n = edge_data.normals[None]
        g = interior.copy()
        un = g[..., 1] * n[..., 0] + g[..., 2] * n[..., 1]
        g[..., 1] -= 2.0 * un * n[..., 0]
        g[..., 2] -= 2.0 * un * n[..., 1]
        return g


@dataclass(frozen=True)
class Periodic(EdgeCondition):
    """Wrap to the opposite edge; must be paired with another Periodic."""

    def ghosts(self, interior, edge_data, t):
        raise RuntimeError("periodic ghosts are filled by BoundaryClosure")


@dataclass(frozen=True)
class Split(EdgeCondition):
    """Choose between two conditions face by face.

    ``where(face_midpoints) -> bool`` selects ``first`` where true.
    """

    where: Callable
    first: EdgeCondition
    second: EdgeCondition

    def ghosts(self, interior, edge_data, t):
        sel = np.asarray(self.where(edge_data.face_midpoints), dtype=bool)
        a = self.first.ghosts(interior, edge_data, t)
        b = self.second.ghosts(interior, edge_data, t)
        return np.where(sel[None, :, None], a, b)


@dataclass(frozen=True)
class EdgeData:
    ghost_centers: np.ndarray   # (2, m, 2)
    face_midpoints: np.ndarray  # (m, 2)
    normals: np.ndarray         # (m, 2) outward unit normals


def _edge_geometry(mesh):
    c = mesh.centers
    xi_mid = mesh.xi_face_midpoints()
    eta_mid = mesh.eta_face_midpoints()
    k = np.arange(1, NGHOST + 1, dtype=float)[:, None, None]

    def ghost(c0, c1):
        return c0[None] + k * (c0 - c1)[None]

    return {
        "west": EdgeData(ghost(c[0], c[1]), xi_mid[0], -mesh.xi_normals[0]),
        "east": EdgeData(ghost(c[-1], c[-2]), xi_mid[-1], mesh.xi_normals[-1]),
        "south": EdgeData(ghost(c[:, 0], c[:, 1]), eta_mid[:, 0],
                          -mesh.eta_normals[:, 0]),
        "north": EdgeData(ghost(c[:, -1], c[:, -2]), eta_mid[:, -1],
                          mesh.eta_normals[:, -1]),
    }


class BoundaryClosure:
    """Conditions for all four edges of a mesh.

    Parameters
    ----------
    mesh : StructuredMesh
    west, east, south, north : EdgeCondition
    """

    def __init__(self, mesh, west, east, south, north):
        if min(mesh.shape) < NGHOST:
            raise ConfigurationError(
                f"mesh {mesh.shape} is too small for {NGHOST} ghost layers")
        self.mesh = mesh
        self.conditions = {"west": west, "east": east, "south": south, "north": north}
        for name, cond in self.conditions.items():
            if not isinstance(cond, EdgeCondition):
                raise ConfigurationError(f"{name} edge has no boundary condition")
        for a, b in (("west", "east"), ("south", "north")):
            pa = isinstance(self.conditions[a], Periodic)
            pb = isinstance(self.conditions[b], Periodic)
            if pa != pb:
                raise ConfigurationError(f"periodic {a}/{b} edges must be paired")
        self._geometry = _edge_geometry(mesh)

    @property
    def periodic_x(self):
        return isinstance(self.conditions["west"], Periodic)

    @property
    def periodic_y(self):
        return isinstance(self.conditions["south"], Periodic)

    @classmethod
    def periodic(cls, mesh):
        p = Periodic()
        return cls(mesh, p, p, p, p)

    def pad(self, w, t=0.0):
        """Primitive field ``(nx, ny, 4)`` -> ``(nx + 4, ny + 4, 4)`` with ghosts.

        Corner ghost blocks are left as NaN; the dimension-by-dimension
        reconstruction never reads them.
        """
        nx, ny = w.shape[:2]
        g = NGHOST
        out = np.full((nx + 2 * g, ny + 2 * g, 4), np.nan)
        out[g:-g, g:-g] = w
        geo = self._geometry
        if self.periodic_x:
            out[:g, g:-g] = w[-g:]
            out[-g:, g:-g] = w[:g]
        else:
            west = self.conditions["west"].ghosts(w[:g][::1], geo["west"], t)
            out[:g, g:-g] = west[::-1]
            east = self.conditions["east"].ghosts(w[::-1][:g], geo["east"], t)
            out[-g:, g:-g] = east
        if self.periodic_y:
            out[g:-g, :g] = w[:, -g:]
            out[g:-g, -g:] = w[:, :g]
        else:
            south = self.conditions["south"].ghosts(
                np.swapaxes(w[:, :g], 0, 1), geo["south"], t)
            out[g:-g, :g] = np.swapaxes(south[::-1], 0, 1)
            north = self.conditions["north"].ghosts(
                np.swapaxes(w[:, ::-1][:, :g], 0, 1), geo["north"], t)
            out[g:-g, -g:] = np.swapaxes(north, 0, 1)
        return out

    def pad_flags(self, flags):
        """Extend per-cell limiter flags by one layer per side.

        Periodic directions wrap; other edges copy the adjacent interior flag.
        """
        f = np.asarray(flags, dtype=bool)
        f = np.pad(f, ((1, 1), (0, 0)), mode="wrap" if self.periodic_x else "edge")
        f = np.pad(f, ((0, 0), (1, 1)), mode="wrap" if self.periodic_y else "edge")
        return f
