"""Residual assembly and time integration.

The semi-discrete system is ``Omega_i dQ_i/dt = -R_i`` with
``R_i = sum_f H_f . n_f s_f`` over the four faces of cell ``i``.  Steady
problems are marched with a matrix-free LU-SGS scheme using local time
steps; unsteady problems use the three-stage TVD Runge-Kutta scheme with
a global time step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numba
import numpy as np

from ._kernels import FLUX_IDS, face_fluxes
from .errors import ConfigurationError, ContractError, DivergedSolutionError
from .flux import get_flux
from .gasdyn import GAMMA, cons_to_prim, prim_to_cons
from .recon import K_BIAS, TroubleMask, reconstruct_field

STEADY = "implicit-steady"
UNSTEADY = "explicit-unsteady"
DEFAULT_CFL = {STEADY: 1.0, UNSTEADY: 0.3}


@dataclass(frozen=True)
class MarchSettings:
    """Time-integration controls.

    ``cfl=None`` picks 1.0 for the implicit steady scheme and 0.3 for the
    explicit one.
    """

    scheme: str = STEADY
    cfl: float | None = None
    max_iterations: int = 15000
    convergence_tol: float = 1e-14

    def __post_init__(self):
        if self.scheme not in DEFAULT_CFL:
            raise ConfigurationError(
                f"scheme must be one of {sorted(DEFAULT_CFL)}, got {self.scheme!r}")
        if self.cfl is None:
            object.__setattr__(self, "cfl", DEFAULT_CFL[self.scheme])
        if not self.cfl > 0:
            raise ConfigurationError(f"cfl must be positive, got {self.cfl}")
        if not self.convergence_tol > 0:
            raise ConfigurationError(
                f"convergence_tol must be positive, got {self.convergence_tol}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ConfigurationError(
                f"max_iterations must be a positive integer, got {self.max_iterations}")


def _flags(mask, shape):
    flags = mask.flags if isinstance(mask, TroubleMask) else np.asarray(mask, dtype=bool)
    if flags.shape != tuple(shape):
        raise ContractError(f"mask shape {flags.shape} does not match mesh {shape}")
    return flags


def to_primitive(q, iteration=None):
    """``cons_to_prim`` that reports the first bad cell as a divergence."""
    w = cons_to_prim(q, check=False)
    bad = ~((w[..., 0] > 0.0) & (w[..., 3] > 0.0))
    if bad.any():
        cell = np.unravel_index(np.argmax(bad), bad.shape)
        raise DivergedSolutionError(
            f"invalid state rho={w[cell][0]:.6g} p={w[cell][3]:.6g}",
            cell=cell, iteration=iteration)
    return w


@dataclass(eq=False)
class Discretization:
    """Spatial operator: mesh, boundary closure, flux and reconstruction order."""

    mesh: object
    closure: object
    flux: str = "ausm+"
    order: int = 2
    k: float = K_BIAS
    backend: str = "compiled"
    _flux_fn: Callable = field(init=False, repr=False)

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ConfigurationError(f"order must be 1 or 2, got {self.order}")
        if self.backend not in ("compiled", "numpy"):
            raise ConfigurationError(
                f"backend must be 'compiled' or 'numpy', got {self.backend!r}")
        self._flux_fn = get_flux(self.flux)

    @property
    def shape(self):
        return self.mesh.shape

    def residual(self, q, mask, t=0.0):
        return assemble_residual(q, self, mask, t)

    def face_radii(self, w):
        """Own-cell spectral radii at the four faces, ``(nx, ny, 4)`` (W, E, S, N)."""
        m = self.mesh
        a = np.sqrt(GAMMA * w[..., 3] / w[..., 0])
        u, v = w[..., 1], w[..., 2]

        def rad(n):
            return np.abs(u * n[..., 0] + v * n[..., 1]) + a

        return np.stack((rad(m.xi_normals[:-1]), rad(m.xi_normals[1:]),
                         rad(m.eta_normals[:, :-1]), rad(m.eta_normals[:, 1:])),
                        axis=-1)

    def wave_sum(self, w):
        """``sum_f (|u_n| + a)_f s_f`` per cell using each cell's own state."""
        m = self.mesh
        r = self.face_radii(w)
        return (r[..., 0] * m.xi_lengths[:-1] + r[..., 1] * m.xi_lengths[1:]
                + r[..., 2] * m.eta_lengths[:, :-1] + r[..., 3] * m.eta_lengths[:, 1:])


def assemble_residual(q, disc, mask, t=0.0):
    """Flux balance ``R_i = sum_f H_f . n_f s_f`` for every cell.

    Parameters
    ----------
    q : ndarray, shape (nx, ny, 4)
        Conserved cell averages.
    disc : Discretization
    mask : TroubleMask or bool array, shape (nx, ny)
        Cells whose reconstruction is limited.
    t : float
        Time passed to time-dependent boundary states.

    Raises
    ------
    DivergedSolutionError
        If a cell holds a nonpositive density or pressure.
    """
    mesh = disc.mesh
    flags = _flags(mask, mesh.shape)
    w = to_primitive(q)
    wg = disc.closure.pad(w, t)
    fg = disc.closure.pad_flags(flags)
    if disc.backend == "compiled":
        args = (disc.order, float(disc.k), FLUX_IDS[disc.flux])
        fx = face_fluxes(wg, fg, mesh.xi_normals, mesh.xi_lengths, 0, *args)
        fy = face_fluxes(wg, fg, mesh.eta_normals, mesh.eta_lengths, 1, *args)
    else:
        fx, fy = _face_fluxes_numpy(wg, fg, disc)
    res = fx[1:] - fx[:-1] + fy[:, 1:] - fy[:, :-1]
    if not np.all(np.isfinite(res)):
        cell = np.unravel_index(np.argmax(~np.isfinite(res).all(axis=-1)), mesh.shape)
        raise DivergedSolutionError("non-finite residual", cell=cell)
    return res


def _face_fluxes_numpy(wg, fg, disc):
    mesh = disc.mesh
    flux = disc._flux_fn
    left, right = reconstruct_field(wg[:, 2:-2], fg[:, 1:-1], 0, disc.k, disc.order)
    fx = flux(left, right, mesh.xi_normals, check=False) * mesh.xi_lengths[..., None]
    left, right = reconstruct_field(wg[2:-2, :], fg[1:-1, :], 1, disc.k, disc.order)
    fy = flux(left, right, mesh.eta_normals, check=False) * mesh.eta_lengths[..., None]
    return fx, fy


def residual_norm(res, mesh_or_volumes):
    """``RN = sqrt(sum_i sum_c R_ic^2 Omega_i)``."""
    vol = getattr(mesh_or_volumes, "volumes", mesh_or_volumes)
    res = np.asarray(res, dtype=float)
    return float(np.sqrt(np.sum(np.sum(res * res, axis=-1) * vol)))


# ---------------------------------------------------------------------------
# LU-SGS

@numba.njit(cache=True, inline="always")
def _delta_flux(q, dq, nx, ny):
    """``H(q + dq) . n - H(q) . n`` for one conserved state."""
    g1 = GAMMA - 1.0
    r0, mx0, my0, e0 = q[0], q[1], q[2], q[3]
    u0, v0 = mx0 / r0, my0 / r0
    p0 = g1 * (e0 - 0.5 * r0 * (u0 * u0 + v0 * v0))
    un0 = u0 * nx + v0 * ny
    r1, mx1, my1, e1 = r0 + dq[0], mx0 + dq[1], my0 + dq[2], e0 + dq[3]
    u1, v1 = mx1 / r1, my1 / r1
    p1 = g1 * (e1 - 0.5 * r1 * (u1 * u1 + v1 * v1))
    un1 = u1 * nx + v1 * ny
    return (r1 * un1 - r0 * un0,
            mx1 * un1 + p1 * nx - mx0 * un0 - p0 * nx,
            my1 * un1 + p1 * ny - my0 * un0 - p0 * ny,
            (e1 + p1) * un1 - (e0 + p0) * un0)


@numba.njit(cache=True)
def _lusgs_sweeps(q, res, diag, xn, xl, xr, en, el, er):
    n_i, n_j = q.shape[0], q.shape[1]
    dq = np.zeros_like(q)
    b = np.empty(4)
    for i in range(n_i):
        for j in range(n_j):
            for c in range(4):
                b[c] = -res[i, j, c]
            if i > 0:
                s, rho = 0.5 * xl[i, j], xr[i, j]
                d = _delta_flux(q[i - 1, j], dq[i - 1, j], -xn[i, j, 0], -xn[i, j, 1])
                for c in range(4):
                    b[c] -= s * (d[c] - rho * dq[i - 1, j, c])
            if j > 0:
                s, rho = 0.5 * el[i, j], er[i, j]
                d = _delta_flux(q[i, j - 1], dq[i, j - 1], -en[i, j, 0], -en[i, j, 1])
                for c in range(4):
                    b[c] -= s * (d[c] - rho * dq[i, j - 1, c])
            for c in range(4):
                dq[i, j, c] = b[c] / diag[i, j]
    for i in range(n_i - 1, -1, -1):
        for j in range(n_j - 1, -1, -1):
            for c in range(4):
                b[c] = 0.0
            if i < n_i - 1:
                s, rho = 0.5 * xl[i + 1, j], xr[i + 1, j]
                d = _delta_flux(q[i + 1, j], dq[i + 1, j], xn[i + 1, j, 0], xn[i + 1, j, 1])
                for c in range(4):
                    b[c] += s * (d[c] - rho * dq[i + 1, j, c])
            if j < n_j - 1:
                s, rho = 0.5 * el[i, j + 1], er[i, j + 1]
                d = _delta_flux(q[i, j + 1], dq[i, j + 1], en[i, j + 1, 0], en[i, j + 1, 1])
                for c in range(4):
                    b[c] += s * (d[c] - rho * dq[i, j + 1, c])
            for c in range(4):
                dq[i, j, c] -= b[c] / diag[i, j]
    return dq


def lusgs_increment(q, res, disc, cfl):
    """Matrix-free LU-SGS update ``dQ`` for residual ``res``.

    Uses the splitting ``A+- = (A +- rho_A I)/2`` with ``rho_A = |u_n| + a``
    (the larger of the two adjacent cells at each face) and the local time
    step ``dt_i = cfl * Omega_i / sum_f (|u_n| + a)_f s_f``.  Cells are swept
    in lexicographic order forward and in reverse order backward; ghost
    neighbours contribute no increment.
    """
    m = disc.mesh
    w = to_primitive(q)
    own = disc.face_radii(w)
    xr = np.empty(m.xi_lengths.shape)
    xr[1:-1] = np.maximum(own[1:, :, 0], own[:-1, :, 1])
    xr[0], xr[-1] = own[0, :, 0], own[-1, :, 1]
    er = np.empty(m.eta_lengths.shape)
    er[:, 1:-1] = np.maximum(own[:, 1:, 2], own[:, :-1, 3])
    er[:, 0], er[:, -1] = own[:, 0, 2], own[:, -1, 3]
    wave = (own[..., 0] * m.xi_lengths[:-1] + own[..., 1] * m.xi_lengths[1:]
            + own[..., 2] * m.eta_lengths[:, :-1] + own[..., 3] * m.eta_lengths[:, 1:])
    inv_dt_vol = wave / cfl  # Omega_i / dt_i
    sweep = 0.5 * (xr[:-1] * m.xi_lengths[:-1] + xr[1:] * m.xi_lengths[1:]
                   + er[:, :-1] * m.eta_lengths[:, :-1] + er[:, 1:] * m.eta_lengths[:, 1:])
    diag = inv_dt_vol + sweep
    return _lusgs_sweeps(np.ascontiguousarray(q), np.ascontiguousarray(res), diag,
                         np.ascontiguousarray(m.xi_normals), m.xi_lengths, xr,
                         np.ascontiguousarray(m.eta_normals), m.eta_lengths, er)


def lusgs_step(q, disc, mask, settings, res=None, iteration=None):
    """One LU-SGS iteration; returns the updated conserved field."""
    if settings.scheme != STEADY:
        raise ConfigurationError("lusgs_step requires the implicit-steady scheme")
    if res is None:
        res = assemble_residual(q, disc, mask)
    q_new = q + lusgs_increment(q, res, disc, settings.cfl)
    to_primitive(q_new, iteration)
    return q_new


class SteadyResult(NamedTuple):
    q: np.ndarray
    history: np.ndarray
    converged: bool
    iterations: int


def march_to_steady(disc, q0, mask, settings=None, callback=None):
    """Iterate LU-SGS until ``RN < convergence_tol`` or ``max_iterations``.

    RN is evaluated before each update, so ``history[0]`` is the norm of the
    initial field and ``len(history)`` equals the number of iterations.
    ``callback(iteration, rn)`` is invoked once per iteration (1-based).
    """
    settings = settings or MarchSettings()
    if settings.scheme != STEADY:
        raise ConfigurationError("march_to_steady requires the implicit-steady scheme")
    flags = _flags(mask, disc.shape)
    q = np.array(q0, dtype=float)
    vol = disc.mesh.volumes
    history = []
    converged = False
    for it in range(1, settings.max_iterations + 1):
        try:
            res = assemble_residual(q, disc, flags)
        except DivergedSolutionError as exc:
            raise DivergedSolutionError("residual evaluation failed: " + str(exc),
                                        cell=exc.cell, iteration=it) from exc
        rn = residual_norm(res, vol)
        history.append(rn)
        if callback is not None:
            callback(it, rn)
        if not np.isfinite(rn):
            raise DivergedSolutionError("non-finite residual norm", iteration=it)
        if rn < settings.convergence_tol:
            converged = True
            break
        q = q + lusgs_increment(q, res, disc, settings.cfl)
        to_primitive(q, it)
    return SteadyResult(q, np.asarray(history), converged, len(history))


def solve_steady(disc, w0, mask, settings=None, callback=None):
    """``march_to_steady`` taking and returning primitive fields."""
    r = march_to_steady(disc, prim_to_cons(w0), mask, settings, callback)
    return r._replace(q=cons_to_prim(r.q))


# ---------------------------------------------------------------------------
# Explicit unsteady integration

def stable_time_step(q, disc, cfl):
    """Global ``dt = cfl * min_i Omega_i / sum_f (|u_n| + a)_f s_f``."""
    w = to_primitive(q)
    return float(cfl * np.min(disc.mesh.volumes / disc.wave_sum(w)))


def tvd_rk3_step(q, dt, disc, mask, t=0.0, return_residual=False):
    """Three-stage Shu-Osher TVD Runge-Kutta step.

    ``Q1 = Q + dt L(Q)``, ``Q2 = 3/4 Q + 1/4 (Q1 + dt L(Q1))``,
    ``Q_new = 1/3 Q + 2/3 (Q2 + dt L(Q2))`` with ``L = -R / Omega``.
    Boundary states are evaluated at the stage times ``t``, ``t + dt`` and
    ``t + dt/2``.  With ``return_residual`` the residual of the first stage
    is returned as well.
    """
    inv_vol = 1.0 / disc.mesh.volumes[..., None]

    def rate(state, time):
        return -assemble_residual(state, disc, mask, time) * inv_vol

    res0 = assemble_residual(q, disc, mask, t)
    q1 = q - dt * res0 * inv_vol
    q2 = 0.75 * q + 0.25 * (q1 + dt * rate(q1, t + dt))
    q_new = q / 3.0 + 2.0 / 3.0 * (q2 + dt * rate(q2, t + 0.5 * dt))
    return (q_new, res0) if return_residual else q_new


class UnsteadyResult(NamedTuple):
    q: np.ndarray
    time: float
    steps: int
    history: np.ndarray


def advance(disc, q0, t_final, mask, settings=None, callback=None, t0=0.0):
    """March an unsteady problem to ``t_final``.

    ``mask`` is either fixed (TroubleMask or bool array) or a callable
    ``mask(step, q, t)`` re-evaluated at the start of every time step.  The
    last step is shortened to land on ``t_final``.  ``callback(step, t, q)``
    runs after each step.  ``history`` holds RN of the residual at the start
    of every step.
    """
    settings = settings or MarchSettings(scheme=UNSTEADY)
    if settings.scheme != UNSTEADY:
        raise ConfigurationError("advance requires the explicit-unsteady scheme")
    q = np.array(q0, dtype=float)
    t = float(t0)
    step = 0
    history = []
    vol = disc.mesh.volumes
    while t < t_final:
        flags = mask(step, q, t) if callable(mask) else mask
        dt = stable_time_step(q, disc, settings.cfl)
        if t + dt >= t_final * (1.0 - 1e-14):
            dt = t_final - t
        try:
            q, res0 = tvd_rk3_step(q, dt, disc, flags, t, return_residual=True)
            to_primitive(q, step + 1)
        except DivergedSolutionError as exc:
            raise DivergedSolutionError(str(exc).split(",")[0], cell=exc.cell,
                                        iteration=step + 1) from exc
        history.append(residual_norm(res0, vol))
        step += 1
        t = t_final if dt == t_final - t else t + dt
        if callback is not None:
            callback(step, t, q)
        if step > settings.max_iterations:
            raise DivergedSolutionError(
                f"time step collapsed before t={t_final}", iteration=step)
    return UnsteadyResult(q, t, step, np.asarray(history))
