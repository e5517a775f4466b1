"""Structured quadrilateral meshes.

Cells are indexed ``(i, j)`` with ``i`` running along the first grid
direction and ``j`` along the second.  Arrays are stored ``[i, j, ...]``.
Each cell has four faces in the fixed order (west, east, south, north):

* i-faces ``xi_*[i, j]`` separate cells ``(i-1, j)`` and ``(i, j)``; their
  unit normal points toward increasing ``i``.
* j-faces ``eta_*[i, j]`` separate cells ``(i, j-1)`` and ``(i, j)``; their
  unit normal points toward increasing ``j``.

Ghost cells are not part of the mesh; boundary closures synthesise them.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class StructuredMesh:
    """Quadrilateral cell geometry derived from an ``(nx+1, ny+1, 2)`` vertex grid."""

    vertices: np.ndarray
    centers: np.ndarray = field(init=False, repr=False)
    volumes: np.ndarray = field(init=False, repr=False)
    xi_normals: np.ndarray = field(init=False, repr=False)
    xi_lengths: np.ndarray = field(init=False, repr=False)
    eta_normals: np.ndarray = field(init=False, repr=False)
    eta_lengths: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 3 or v.shape[2] != 2 or min(v.shape[:2]) < 2:
            raise ConfigurationError(f"bad vertex array shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

        p00, p10 = v[:-1, :-1], v[1:, :-1]
        p11, p01 = v[1:, 1:], v[:-1, 1:]
        d1, d2 = p11 - p00, p01 - p10
        vol = 0.5 * (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0])
        if np.any(vol <= 0.0):
            bad = np.argwhere(vol <= 0.0)[0]
            raise ConfigurationError(
                f"nonpositive cell volume at {tuple(bad)}: {vol[tuple(bad)]:.3e}"
            )

        # i-face from vertex (i, j) to (i, j+1); normal (ty, -tx) points to +i.
        t = v[:, 1:] - v[:, :-1]
        xi_len = np.hypot(t[..., 0], t[..., 1])
        xi_n = np.stack((t[..., 1], -t[..., 0]), axis=-1) / xi_len[..., None]
        # j-face from vertex (i, j) to (i+1, j); normal (-ty, tx) points to +j.
        t = v[1:, :] - v[:-1, :]
        eta_len = np.hypot(t[..., 0], t[..., 1])
        eta_n = np.stack((-t[..., 1], t[..., 0]), axis=-1) / eta_len[..., None]

        centers = _quad_centroids(p00, p10, p11, p01, vol)
        for name, arr in (("centers", centers), ("volumes", vol),
                          ("xi_normals", xi_n), ("xi_lengths", xi_len),
                          ("eta_normals", eta_n), ("eta_lengths", eta_len)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def nx(self):
        return self.vertices.shape[0] - 1

    @property
    def ny(self):
        return self.vertices.shape[1] - 1

    @property
    def shape(self):
        return (self.nx, self.ny)

    def cell_faces(self, i, j):
        """Outward unit normals ``(4, 2)`` and lengths ``(4,)`` ordered W, E, S, N."""
        normals = np.array([-self.xi_normals[i, j], self.xi_normals[i + 1, j],
                            -self.eta_normals[i, j], self.eta_normals[i, j + 1]])
        lengths = np.array([self.xi_lengths[i, j], self.xi_lengths[i + 1, j],
                            self.eta_lengths[i, j], self.eta_lengths[i, j + 1]])
        return normals, lengths

    def closure_defect(self):
        """Per-cell ``|sum_f n_f s_f|`` divided by the cell perimeter."""
        sx = self.xi_normals * self.xi_lengths[..., None]
        se = self.eta_normals * self.eta_lengths[..., None]
        total = sx[1:] - sx[:-1] + se[:, 1:] - se[:, :-1]
        perimeter = (self.xi_lengths[1:] + self.xi_lengths[:-1]
                     + self.eta_lengths[:, 1:] + self.eta_lengths[:, :-1])
        return np.hypot(total[..., 0], total[..., 1]) / perimeter

    def cell_bounds(self):
        """Axis-aligned bounding box of each cell: ``(xmin, xmax, ymin, ymax)``."""
        v = self.vertices
        corners = np.stack((v[:-1, :-1], v[1:, :-1], v[1:, 1:], v[:-1, 1:]))
        lo, hi = corners.min(axis=0), corners.max(axis=0)
        return lo[..., 0], hi[..., 0], lo[..., 1], hi[..., 1]

    def xi_face_midpoints(self):
        v = self.vertices
        return 0.5 * (v[:, 1:] + v[:, :-1])

    def eta_face_midpoints(self):
        v = self.vertices
        return 0.5 * (v[1:, :] + v[:-1, :])

    @property
    def area(self):
        return float(self.volumes.sum())

    def to_csv(self, path):
        """Dump one row per cell: ``i, j, center_x, center_y, volume``."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "center_x", "center_y", "volume"])
            for i in range(self.nx):
                for j in range(self.ny):
                    cx, cy = self.centers[i, j]
                    writer.writerow([i, j, repr(float(cx)), repr(float(cy)),
                                     repr(float(self.volumes[i, j]))])


def _quad_centroids(p00, p10, p11, p01, vol):
    # Split along the p00-p11 diagonal and area-weight the two triangles.
    def tri(a, b, c):
        area = 0.5 * ((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
                      - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))
        return area, (a + b + c) / 3.0

    a1, c1 = tri(p00, p10, p11)
    a2, c2 = tri(p00, p11, p01)
    return (a1[..., None] * c1 + a2[..., None] * c2) / vol[..., None]


def _check_counts(**counts):
    for name, n in counts.items():
        if int(n) != n or n < 1:
            raise ConfigurationError(f"{name} must be a positive integer, got {n}")


def _check_range(name, rng):
    lo, hi = rng
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise ConfigurationError(f"degenerate {name} {rng}")


def build_uniform_mesh(x_range, y_range, nx, ny):
    """Axis-aligned uniform mesh of ``nx`` by ``ny`` cells.

    Cell ``(i, j)`` spans ``[x0 + i dx, x0 + (i+1) dx] x [y0 + j dy, y0 + (j+1) dy]``.
    """
    _check_counts(nx=nx, ny=ny)
    _check_range("x_range", x_range)
    _check_range("y_range", y_range)
    x = _grid_line(x_range, nx)
    y = _grid_line(y_range, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    return StructuredMesh(np.stack((X, Y), axis=-1))


def _grid_line(rng, n):
    lo, hi = float(rng[0]), float(rng[1])
    h = (hi - lo) / n
    pts = lo + h * np.arange(n + 1)
    pts[-1] = hi
    return pts


def build_sheared_mesh(x_range, y_range, nx, ny, angle):
    """Parallelogram mesh whose i-lines are inclined at ``angle`` degrees.

    The bottom edge spans ``x_range`` at ``y = y_range[0]``; each row of
    vertices is shifted by ``(y - y0) / tan(angle)``.
    """
    _check_counts(nx=nx, ny=ny)
    _check_range("x_range", x_range)
    _check_range("y_range", y_range)
    if not 0.0 < angle < 180.0:
        raise ConfigurationError(f"shear angle must lie in (0, 180), got {angle}")
    x = _grid_line(x_range, nx)
    y = _grid_line(y_range, ny)
    X, Y = np.meshgrid(x, y, indexing="ij")
    cot = 0.0 if angle == 90.0 else 1.0 / np.tan(np.radians(angle))
    X = X + (Y - y_range[0]) * cot
    return StructuredMesh(np.stack((X, Y), axis=-1))


@dataclass(frozen=True)
class RampGeometry:
    """Corner points of the two-block ramp domain ABEF + BCDE."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    F: np.ndarray

    @property
    def area(self):
        def cross(u, w):
            return float(u[0] * w[1] - u[1] * w[0])
        return cross(self.B - self.A, self.F - self.A) + cross(self.C - self.B,
                                                                self.E - self.B)


def ramp_geometry(shock_angle, turn_angle, length1=1.0, length2=1.0, height=1.0):
    """Vertices of the ramp domain.

    ``AB`` (x-extent ``length1``) and ``EF`` are horizontal; ``AF`` and the
    shock line ``BE`` are inclined at ``shock_angle``; the ramp wall ``BC``
    (x-extent ``length2``) and ``DE`` are inclined at ``turn_angle``;
    ``CD`` is parallel to ``BE``.  ``height`` is the vertical extent of ``BE``.
    """
    beta, theta = float(shock_angle), float(turn_angle)
    if not 0.0 < theta < beta < 90.0:
        raise ConfigurationError(
            f"ramp requires 0 < turn angle < shock angle < 90, got "
            f"theta={theta}, beta={beta}"
        )
    for name, val in (("length1", length1), ("length2", length2), ("height", height)):
        if not val > 0:
            raise ConfigurationError(f"{name} must be positive, got {val}")
    A = np.array([0.0, 0.0])
    B = np.array([float(length1), 0.0])
    up = np.array([height / np.tan(np.radians(beta)), float(height)])
    F, E = A + up, B + up
    C = B + np.array([float(length2), length2 * np.tan(np.radians(theta))])
    D = C + up
    return RampGeometry(A, B, C, D, E, F)


def build_ramp_mesh(shock_angle, turn_angle, nx1, nx2, ny,
                    length1=1.0, length2=1.0, height=1.0):
    """Two-block mesh for supersonic flow over a ramp with a grid-aligned shock.

    Block 1 (``nx1`` columns) fills ABEF, block 2 (``nx2`` columns) fills
    BCDE.  Both blocks share the grid line BE at column ``nx1``, so a shock
    emanating from the ramp corner B at ``shock_angle`` lies on a grid line.
    """
    _check_counts(nx1=nx1, nx2=nx2, ny=ny)
    g = ramp_geometry(shock_angle, turn_angle, length1, length2, height)
    s = np.linspace(0.0, 1.0, ny + 1)
    r1 = np.linspace(0.0, 1.0, nx1 + 1)
    r2 = np.linspace(0.0, 1.0, nx2 + 1)[1:]
    up = g.F - g.A
    block1 = (g.A + r1[:, None, None] * (g.B - g.A)
              + s[None, :, None] * up)
    block2 = (g.B + r2[:, None, None] * (g.C - g.B)
              + s[None, :, None] * (g.E - g.B))
    return StructuredMesh(np.concatenate((block1, block2), axis=0))
