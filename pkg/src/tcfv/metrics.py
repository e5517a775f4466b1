"""Error norms, total variation and the monotonicity parameter.

The monotonicity parameter ``mu = TV(e) - Linf(e)`` of the density error
``e = rho_exact - rho_num`` vanishes when the numerical profile approaches
the exact one monotonically.  It is evaluated in a window of cells on each
side of the shock along a sampling line.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractError

MU_SLACK = 1e-14

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProfileSample:
    """Density along a sampling line, one cell per grid column."""

    x: np.ndarray
    rho_num: np.ndarray
    rho_exact: np.ndarray
    x_lo: np.ndarray
    x_hi: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.x) <= 0):
            raise ContractError("profile x coordinates must be strictly increasing")

    @property
    def error(self):
        return self.rho_exact - self.rho_num

    def __len__(self):
        return len(self.x)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "rho_num", "rho_exact"])
            for row in zip(self.x, self.rho_num, self.rho_exact):
                wr.writerow([repr(float(v)) for v in row])


def _sample_rows(mesh, w, w_exact, rows):
    cols = np.arange(mesh.nx)
    xmin, xmax, _, _ = mesh.cell_bounds()
    return ProfileSample(
        x=mesh.centers[cols, rows, 0].copy(),
        rho_num=np.asarray(w)[cols, rows, 0].copy(),
        rho_exact=np.asarray(w_exact)[cols, rows, 0].copy(),
        x_lo=xmin[cols, rows], x_hi=xmax[cols, rows],
    )


def extract_profile(w, mesh, y_line, w_exact):
    """Sample the cells just above ``y = y_line``.

    In every column the cell with the smallest center ``y`` strictly greater
    than ``y_line`` is taken.
    """
    yc = mesh.centers[..., 1]
    above = yc > y_line
    _, _, ymin, ymax = mesh.cell_bounds()
    if not (ymin.min() <= y_line < ymax.max()) or not above.any(axis=1).all():
        raise ConfigurationError(f"sampling line y={y_line} does not cross every column")
    rows = np.argmin(np.where(above, yc, np.inf), axis=1)
    return _sample_rows(mesh, w, w_exact, rows)


def extract_row(w, mesh, row, w_exact):
    """Sample grid row ``j = row`` (used on skewed meshes)."""
    if not 0 <= row < mesh.ny:
        raise ConfigurationError(f"row {row} outside mesh with {mesh.ny} rows")
    return _sample_rows(mesh, w, w_exact, np.full(mesh.nx, row))


def error_norms(e):
    """``(L2, Linf)`` with ``L2 = sqrt(mean(e^2))``."""
    e = np.asarray(e, dtype=float).ravel()
    if e.size == 0:
        raise ContractError("error norms of an empty sequence")
    return float(np.sqrt(np.mean(e * e))), float(np.max(np.abs(e)))


def total_variation(e):
    """``sum |e_{i+1} - e_i|``."""
    e = np.asarray(e, dtype=float).ravel()
    return float(np.abs(np.diff(e)).sum())


def _mu(tv, linf):
    mu = tv - linf
    return 0.0 if -MU_SLACK < mu < 0.0 else mu


@dataclass(frozen=True)
class WindowMetrics:
    tv: float
    linf: float
    mu: float
    cells: int


@dataclass(frozen=True)
class MetricsReport:
    """Window metrics on both sides of a shock and their sums.

    ``l2`` is taken over the union of both windows; ``linf`` and ``tv`` are the
    sums of the per-window values, and ``mu = tv - linf``.
    """

    pre: WindowMetrics
    post: WindowMetrics
    l2: float
    window: int

    @property
    def tv(self):
        return self.pre.tv + self.post.tv

    @property
    def linf(self):
        return self.pre.linf + self.post.linf

    @property
    def mu(self):
        return _mu(self.tv, self.linf)

    def row(self):
        return {"L2": self.l2, "Linf": self.linf, "TV": self.tv,
                "mu_pre": self.pre.mu, "mu_post": self.post.mu,
                "mu_overall": self.mu}


def _window(e, cells):
    tv = total_variation(e)
    linf = float(np.max(np.abs(e)))
    return WindowMetrics(tv, linf, _mu(tv, linf), cells)


def shock_windows(profile, shock_x=None, window=20, upstream="low", split=None):
    """Index arrays of the pre- and post-shock windows, ordered along the flow.

    With ``shock_x`` a column whose interior contains it is dropped from
    both windows.  ``split`` instead gives the index of the first column past
    a shock lying on a grid line, and nothing is dropped.
    ``upstream='low'`` means the pre-shock side has smaller ``x``.
    """
    x = profile.x
    idx = np.arange(len(x))
    if split is not None:
        low, high = idx[:split], idx[split:]
        where = f"column {split}"
    elif shock_x is not None:
        crossing = (profile.x_lo < shock_x) & (shock_x < profile.x_hi)
        low = idx[(x < shock_x) & ~crossing]
        high = idx[(x > shock_x) & ~crossing]
        where = f"x={shock_x}"
    else:
        raise ContractError("give either shock_x or split")
    if low.size < window or high.size < window:
        raise ContractError(
            f"need {window} cells on each side of the shock at {where}; "
            f"available: {low.size} below, {high.size} above")
    low, high = low[-window:], high[:window]
    if upstream == "low":
        return low, high
    if upstream == "high":
        return high[::-1], low[::-1]
    raise ConfigurationError(f"upstream must be 'low' or 'high', got {upstream!r}")


def monotonicity_mu(profile, shock_x=None, window=20, upstream="low", split=None):
    """TV, Linf and ``mu`` of the density error on both sides of a shock.

    See :func:`shock_windows` for how the windows are chosen.
    """
    pre, post = shock_windows(profile, shock_x, window, upstream, split)
    e = profile.error
    l2, _ = error_norms(np.concatenate((e[pre], e[post])))
    report = MetricsReport(_window(e[pre], window), _window(e[post], window), l2, window)
    for name, mu in (("pre", report.pre.mu), ("post", report.post.mu), ("overall", report.mu)):
        if mu < -MU_SLACK:
            # possible when the error does not vanish at the window edge
            log.warning("negative mu_%s = %.3e", name, mu)
    return report


def order_of_accuracy(norm_h1, norm_h2, h1, h2):
    """``n = ln(norm_h1 / norm_h2) / ln(h1 / h2)``."""
    vals = (norm_h1, norm_h2, h1, h2)
    if not all(np.isfinite(v) and v > 0 for v in vals):
        raise ContractError(f"order of accuracy needs positive inputs, got {vals}")
    if h1 == h2:
        raise ContractError("grid spacings must differ")
    return float(np.log(norm_h1 / norm_h2) / np.log(h1 / h2))


def field_error_norms(w, w_exact):
    """Density-error ``(L2, Linf)`` over every cell of a field."""
    return error_norms(np.asarray(w_exact)[..., 0] - np.asarray(w)[..., 0])


METRICS_COLUMNS = ["case", "config", "L2", "Linf", "TV", "mu_pre", "mu_post",
                   "mu_overall", "converged", "iters"]


def write_history_csv(path, history):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["iter", "RN"])
        for i, rn in enumerate(history, start=1):
            wr.writerow([i, repr(float(rn))])


def write_rows_csv(path, columns, rows):
    """Write dict rows with a fixed column order; missing keys are blank."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(columns)
        for row in rows:
            wr.writerow([_fmt(row.get(c, "")) for c in columns])


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v
