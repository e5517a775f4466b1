"""MUSCL reconstruction with per-cell selectable slope limiting.

For a cell ``i`` with backward and forward differences ``dm = w_i - w_{i-1}``
and ``dp = w_{i+1} - w_i`` the face states are

``W^L_{i+1/2} = w_i + 1/4 [(1-k) dm + (1+k) dp]``
``W^R_{i-1/2} = w_i - 1/4 [(1+k) dm + (1-k) dp]``

and the limited variant multiplies the bracket by ``phi(r)``, ``r = dp/dm``,
with ``phi(r) = 3r / (2r^2 - r + 2)`` (the Hemker-Koren limiter for
``k = 1/3``).  Limiting is applied componentwise to ``(rho, u, v, p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError

K_BIAS = 1.0 / 3.0
# Relative threshold below which a one-sided difference counts as zero.
SMALL_DIFF = 1e-12


def slope_limiter_phi(r):
    """Evaluate ``phi(r) = 3r / (2r^2 - r + 2)``, clamped to zero for ``r <= 0``.

    ``phi(+inf)`` is taken as its limit, zero.
    """
    r = np.asarray(r, dtype=float)
    with np.errstate(invalid="ignore", over="ignore"):
        val = 3.0 * r / (2.0 * r * r - r + 2.0)
    return np.where((r > 0.0) & np.isfinite(r), val, 0.0)


def limiter_from_differences(dm, dp, scale=1.0):
    """``phi(dp/dm)`` written without forming the ratio.

    ``phi = 3 dp dm / (2 dp^2 - dp dm + 2 dm^2)``; the denominator is
    positive whenever ``dp dm > 0``.  Differences with opposite signs
    (an extremum) give zero, as do two differences that are both below
    ``SMALL_DIFF * max(1, |scale|)``.
    """
    dm = np.asarray(dm, dtype=float)
    dp = np.asarray(dp, dtype=float)
    prod = dp * dm
    den = 2.0 * dp * dp - prod + 2.0 * dm * dm
    eps = SMALL_DIFF * np.maximum(1.0, np.abs(scale))
    active = (prod > 0.0) & ~((np.abs(dm) < eps) & (np.abs(dp) < eps))
    return np.where(active, 3.0 * prod / np.where(active, den, 1.0), 0.0)


def muscl_faces(w_minus, w_0, w_plus, limited=False, k=K_BIAS):
    """Face states of the middle cell of a three-cell stencil.

    Parameters
    ----------
    w_minus, w_0, w_plus : array_like, shape (..., 4)
        Primitive cell averages of cells ``i-1``, ``i``, ``i+1``.
    limited : bool or array_like of bool, shape (...)
        Whether to apply the slope limiter; broadcasts over cells.
    k : float
        Upwind-biasing parameter.

    Returns
    -------
    east, west : ndarray, shape (..., 4)
        ``W^L`` at face ``i+1/2`` and ``W^R`` at face ``i-1/2``.
    """
    w_minus = np.asarray(w_minus, dtype=float)
    w_0 = np.asarray(w_0, dtype=float)
    w_plus = np.asarray(w_plus, dtype=float)
    dm = w_0 - w_minus
    dp = w_plus - w_0
    east_inc = 0.25 * ((1.0 - k) * dm + (1.0 + k) * dp)
    west_inc = 0.25 * ((1.0 + k) * dm + (1.0 - k) * dp)
    limited = np.asarray(limited, dtype=bool)
    if limited.any():
        phi = limiter_from_differences(dm, dp, scale=w_0)
        phi = np.where(limited[..., None], phi, 1.0)
        east_inc = phi * east_inc
        west_inc = phi * west_inc
    return w_0 + east_inc, w_0 - west_inc


@dataclass(frozen=True, eq=False)
class TroubleMask:
    """Per-cell limiter flags plus a tag naming how they were produced."""

    flags: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        flags = np.array(self.flags, dtype=bool)
        if flags.ndim != 2:
            raise ContractError(f"mask must be 2-D, got shape {flags.shape}")
        flags.setflags(write=False)
        object.__setattr__(self, "flags", flags)

    @classmethod
    def everywhere(cls, shape):
        return cls(np.ones(shape, dtype=bool), "everywhere")

    @classmethod
    def nowhere(cls, shape):
        return cls(np.zeros(shape, dtype=bool), "none")

    @property
    def shape(self):
        return self.flags.shape

    @property
    def count(self):
        return int(self.flags.sum())

    def __or__(self, other):
        if self.shape != other.shape:
            raise ContractError(f"mask shapes differ: {self.shape} vs {other.shape}")
        return TroubleMask(self.flags | other.flags,
                           f"{self.provenance}|{other.provenance}")

    def issuperset(self, other):
        return bool(np.all(self.flags | ~other.flags))

    def to_csv(self, path):
        """Write ``i, j, flag`` rows."""
        ii, jj = np.meshgrid(np.arange(self.shape[0]), np.arange(self.shape[1]),
                             indexing="ij")
        rows = np.stack((ii.ravel(), jj.ravel(), self.flags.ravel().astype(int)),
                        axis=1)
        np.savetxt(path, rows, fmt="%d", delimiter=",", header="i,j,flag",
                   comments="")


def reconstruct_field(padded, limited, axis=0, k=K_BIAS, order=2):
    """Left and right states at every face along one grid direction.

    Parameters
    ----------
    padded : ndarray, shape (n + 4, m, 4) for ``axis=0``
        Primitive states with two ghost layers on each side along ``axis``.
    limited : ndarray of bool, shape (n + 2, m)
        Limiter flags for the interior cells plus one ghost layer per side.
    axis : {0, 1}
        Direction of reconstruction.
    order : {1, 2}
        ``1`` copies cell averages to the faces (first-order scheme).

    Returns
    -------
    left, right : ndarray, shape (n + 1, m, 4)
        ``left[f]`` belongs to the cell before face ``f`` and ``right[f]``
        to the cell after it.  A one-sided state with nonpositive density or
        pressure is replaced by its cell average.
    """
    w = np.moveaxis(np.asarray(padded, dtype=float), axis, 0)
    lim = np.moveaxis(np.asarray(limited, dtype=bool), axis, 0)
    n = w.shape[0] - 4
    if n < 1 or lim.shape[0] != n + 2 or lim.shape[1:] != w.shape[1:-1]:
        raise ContractError(
            f"padded field {w.shape} and limiter flags {lim.shape} do not match"
        )
    centre = w[1:-1]
    if order == 1:
        left, right = centre[:-1], centre[1:]
    else:
        east, west = muscl_faces(w[:-2], centre, w[2:], lim, k)
        east = _positivity_fallback(east, centre)
        west = _positivity_fallback(west, centre)
        left, right = east[:-1], west[1:]
    return np.moveaxis(left, 0, axis), np.moveaxis(right, 0, axis)


def _positivity_fallback(face, centre):
    bad = (face[..., 0] <= 0.0) | (face[..., 3] <= 0.0)
    if bad.any():
        face = np.where(bad[..., None], centre, face)
    return face
