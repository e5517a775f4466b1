"""Troubled-cell masks: indicator detection and geometric labeling.

Three ways to decide where the slope limiter acts:

* ``detect_troubled`` flags cells whose density differs from their four
  face neighbours by more than a relative threshold.
* ``label_aligned`` flags whole grid columns on either side of a shock that
  lies on a grid line.
* ``label_nonaligned`` traces the shock line and a set of vertically offset
  parallel lines through the mesh with ``trace_line``.

Configurations are written ``'XY'``: ``X`` layers (columns or parallel
lines) on the pre-shock side and ``Y`` on the post-shock side.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ConfigurationError, ContractError
from .recon import TroubleMask


def indicator_value(rho0, neighbours):
    """``I = sum_j |rho0 - rho_j| / max(rho0, rho_1..rho_4)``.

    ``neighbours`` has the four face-neighbour densities on its last axis.
    """
    rho0 = np.asarray(rho0, dtype=float)
    nb = np.asarray(neighbours, dtype=float)
    if nb.shape[-1] != 4:
        raise ContractError(f"expected 4 neighbour densities, got shape {nb.shape}")
    top = np.maximum(rho0, nb.max(axis=-1))
    return np.abs(rho0[..., None] - nb).sum(axis=-1) / top


def indicator_field(rho, periodic=(False, False)):
    """Indicator for every cell of a ``(nx, ny)`` density field.

    A neighbour outside a non-periodic edge is replaced by the cell's own
    value, so it contributes nothing.
    """
    rho = np.asarray(rho, dtype=float)
    px, py = periodic
    padded = np.pad(rho, ((1, 1), (0, 0)), mode="wrap" if px else "edge")
    padded = np.pad(padded, ((0, 0), (1, 1)), mode="wrap" if py else "edge")
    nb = np.stack((padded[:-2, 1:-1], padded[2:, 1:-1],
                   padded[1:-1, :-2], padded[1:-1, 2:]), axis=-1)
    return indicator_value(rho, nb)


def detect_troubled(rho, threshold, periodic=(False, False)):
    """Flag cells with ``I >= threshold``."""
    if not threshold > 0:
        raise ConfigurationError(f"indicator threshold must be positive, got {threshold}")
    flags = indicator_field(rho, periodic) >= threshold
    return TroubleMask(flags, f"indicator-K={threshold:g}")


def parse_config(config):
    """``'XY'`` -> ``(X, Y)``; both digits must be at least 1."""
    if isinstance(config, (tuple, list)) and len(config) == 2:
        x, y = (int(c) for c in config)
    else:
        m = re.fullmatch(r"\s*'?([1-9])([1-9])'?\s*", str(config))
        if not m:
            raise ConfigurationError(
                f"configuration must be two digits 1-9 such as '33', got {config!r}")
        x, y = int(m.group(1)), int(m.group(2))
    if x < 1 or y < 1:
        raise ConfigurationError(f"configuration counts must be >= 1, got {(x, y)}")
    return x, y


def label_aligned(mesh, shock_column, config, pre_side="low"):
    """Flag ``X`` columns before and ``Y`` columns after a grid-aligned shock.

    ``shock_column`` is the index of the i-face line holding the shock, so
    columns ``shock_column - 1`` and ``shock_column`` touch it.
    ``pre_side='low'`` means the upstream side has the smaller ``i``.
    """
    x, y = parse_config(config)
    if pre_side not in ("low", "high"):
        raise ConfigurationError(f"pre_side must be 'low' or 'high', got {pre_side!r}")
    low, high = (x, y) if pre_side == "low" else (y, x)
    nx = mesh.nx
    if not (0 < shock_column < nx) or low > shock_column or shock_column + high > nx:
        raise ConfigurationError(
            f"config {config!r} needs {low} columns below and {high} above face "
            f"{shock_column}, mesh has {nx} columns")
    flags = np.zeros(mesh.shape, dtype=bool)
    flags[shock_column - low:shock_column + high] = True
    return TroubleMask(flags, f"aligned-{x}{y}")


def trace_line(mesh, p1, p2):
    """Cells whose bounds contain the line point at their center row or column.

    For each cell, with ``(xc, yc)`` its center and the line
    ``y = y1 + m (x - x1)``, the cell is flagged when ``x_shock(yc)`` lies in
    ``[x_min, x_max]`` or ``y_shock(xc)`` lies in ``[y_min, y_max]`` (closed
    intervals, bounds from the cell corners).  For a vertical line only the
    first test is defined and for a horizontal one only the second.
    """
    x1, y1 = (float(c) for c in p1)
    x2, y2 = (float(c) for c in p2)
    if x1 == x2 and y1 == y2:
        raise ContractError("line endpoints coincide")
    xmin, xmax, ymin, ymax = mesh.cell_bounds()
    xc, yc = mesh.centers[..., 0], mesh.centers[..., 1]
    hit = np.zeros(mesh.shape, dtype=bool)
    if x1 == x2:
        hit |= (xmin <= x1) & (x1 <= xmax)
        return TroubleMask(hit, "trace")
    m = (y2 - y1) / (x2 - x1)
    y_shock = y1 + m * (xc - x1)
    hit |= (ymin <= y_shock) & (y_shock <= ymax)
    if m != 0.0:
        x_shock = x1 + (yc - y1) / m
        hit |= (xmin <= x_shock) & (x_shock <= xmax)
    return TroubleMask(hit, "trace")


def vertical_cell_size(mesh):
    """Median cell height, the default offset between traced parallel lines."""
    _, _, ymin, ymax = mesh.cell_bounds()
    v = mesh.vertices
    return float(np.median(np.abs(v[:, 1:, 1] - v[:, :-1, 1])))


def label_nonaligned(mesh, spec, config, h=None):
    """Union of ``trace_line`` over the shock and offset parallel lines.

    ``X`` lines are shifted vertically by ``k h`` (``k = 1..X``) toward the
    upstream side and ``Y`` lines by ``k h`` toward the downstream side.
    The side is read off the shock's downstream normal.  For a vertical
    shock the offsets are degenerate and only the shock line is traced.
    """
    x, y = parse_config(config)
    if h is None:
        h = vertical_cell_size(mesh)
    if not h > 0:
        raise ConfigurationError(f"line offset h must be positive, got {h}")
    p1 = np.asarray(spec.p1, dtype=float)
    p2 = np.asarray(spec.p2, dtype=float)
    # moving up increases the signed distance when the normal points up
    down_dir = np.sign(spec.downstream_normal[1])
    flags = trace_line(mesh, p1, p2).flags.copy()
    for count, direction in ((x, -down_dir), (y, down_dir)):
        for k in range(1, count + 1):
            shift = np.array([0.0, direction * k * h])
            flags |= trace_line(mesh, p1 + shift, p2 + shift).flags
    return TroubleMask(flags, f"nonaligned-{x}{y}")
