"""Inviscid face fluxes for the 2-D Euler equations.

All functions take primitive states ``(..., 4)`` and unit normals ``(..., 2)``
and return the flux per unit face length, ``(..., 4)``, in the order
(mass, x-momentum, y-momentum, energy).  Inputs broadcast against each other.
"""

from __future__ import annotations

import numpy as np

from .gasdyn import GAMMA, check_primitive, prim_to_cons

# AUSM+ split-function constants.
AUSM_ALPHA = 3.0 / 16.0
AUSM_BETA = 1.0 / 8.0


def physical_flux(w, n):
    """Projected Euler flux ``H(W) . n``."""
    w = np.asarray(w, dtype=float)
    n = np.asarray(n, dtype=float)
    rho, u, v, p = w[..., 0], w[..., 1], w[..., 2], w[..., 3]
    nx, ny = n[..., 0], n[..., 1]
    un = u * nx + v * ny
    h = GAMMA / (GAMMA - 1.0) * p / rho + 0.5 * (u * u + v * v)
    mass = rho * un
    return np.stack((mass, mass * u + p * nx, mass * v + p * ny, mass * h),
                    axis=-1)


def spectral_radius(w, n):
    """``|u . n| + a`` for unit normal ``n``."""
    w = np.asarray(w, dtype=float)
    n = np.asarray(n, dtype=float)
    un = w[..., 1] * n[..., 0] + w[..., 2] * n[..., 1]
    return np.abs(un) + np.sqrt(GAMMA * w[..., 3] / w[..., 0])


def _split_mach(m):
    """Fourth-degree split Mach polynomials ``(M+, M-)``."""
    sub = np.abs(m) < 1.0
    q = (m * m - 1.0) ** 2
    m_plus = np.where(sub, 0.25 * (m + 1.0) ** 2 + AUSM_BETA * q, 0.5 * (m + np.abs(m)))
    m_minus = np.where(sub, -0.25 * (m - 1.0) ** 2 - AUSM_BETA * q,
                       0.5 * (m - np.abs(m)))
    return m_plus, m_minus


def _split_pressure(m):
    """Fifth-degree split pressure weights ``(P+, P-)``."""
    sub = np.abs(m) < 1.0
    q = m * (m * m - 1.0) ** 2
    sgn = np.sign(m)
    p_plus = np.where(sub, 0.25 * (m + 1.0) ** 2 * (2.0 - m) + AUSM_ALPHA * q,
                      0.5 * (1.0 + sgn))
    p_minus = np.where(sub, 0.25 * (m - 1.0) ** 2 * (2.0 + m) - AUSM_ALPHA * q,
                       0.5 * (1.0 - sgn))
    return p_plus, p_minus


def ausm_plus(wl, wr, n, check=True):
    """AUSM+ flux (Liou 1996).

    The interface speed of sound is ``min(a~_L, a~_R)`` with
    ``a~_L = a*_L^2 / max(a*_L, u_L)``, ``a~_R = a*_R^2 / max(a*_R, -u_R)`` and
    ``a*^2 = 2 (g-1)/(g+1) H`` the critical speed of sound, where ``u`` is the
    velocity along ``n`` (oriented from L to R).

    Raises
    ------
    InvalidStateError
        If ``check`` is set (the default) and either state is invalid.
    """
    wl = np.asarray(wl, dtype=float)
    wr = np.asarray(wr, dtype=float)
    n = np.asarray(n, dtype=float)
    if check:
        check_primitive(wl)
        check_primitive(wr)
    nx, ny = n[..., 0], n[..., 1]
    rl, ul, vl, pl = wl[..., 0], wl[..., 1], wl[..., 2], wl[..., 3]
    rr, ur, vr, pr = wr[..., 0], wr[..., 1], wr[..., 2], wr[..., 3]
    unl = ul * nx + vl * ny
    unr = ur * nx + vr * ny
    hl = GAMMA / (GAMMA - 1.0) * pl / rl + 0.5 * (ul * ul + vl * vl)
    hr = GAMMA / (GAMMA - 1.0) * pr / rr + 0.5 * (ur * ur + vr * vr)

    crit = 2.0 * (GAMMA - 1.0) / (GAMMA + 1.0)
    astar_l = np.sqrt(crit * hl)
    astar_r = np.sqrt(crit * hr)
    a_l = astar_l * astar_l / np.maximum(astar_l, unl)
    a_r = astar_r * astar_r / np.maximum(astar_r, -unr)
    a_face = np.minimum(a_l, a_r)

    ml = unl / a_face
    mr = unr / a_face
    m_plus, _ = _split_mach(ml)
    _, m_minus = _split_mach(mr)
    m_face = m_plus + m_minus
    p_plus, _ = _split_pressure(ml)
    _, p_minus = _split_pressure(mr)
    p_face = p_plus * pl + p_minus * pr

    mass_l = a_face * 0.5 * (m_face + np.abs(m_face))
    mass_r = a_face * 0.5 * (m_face - np.abs(m_face))
    ml_flux = mass_l * rl
    mr_flux = mass_r * rr
    return np.stack((
        ml_flux + mr_flux,
        ml_flux * ul + mr_flux * ur + p_face * nx,
        ml_flux * vl + mr_flux * vr + p_face * ny,
        ml_flux * hl + mr_flux * hr,
    ), axis=-1)


def lax_friedrichs(wl, wr, n, check=True):
    """Local Lax-Friedrichs (Rusanov) flux.

    ``1/2 (H_L + H_R) . n - 1/2 lam (Q_R - Q_L)`` with ``lam`` the larger of
    ``|u_n| + a`` over the two states.
    """
    wl = np.asarray(wl, dtype=float)
    wr = np.asarray(wr, dtype=float)
    if check:
        check_primitive(wl)
        check_primitive(wr)
    lam = np.maximum(spectral_radius(wl, n), spectral_radius(wr, n))
    central = 0.5 * (physical_flux(wl, n) + physical_flux(wr, n))
    jump = prim_to_cons(wr, check=False) - prim_to_cons(wl, check=False)
    return central - 0.5 * lam[..., None] * jump


FLUXES = {
    "ausm+": ausm_plus,
    "lax-friedrichs": lax_friedrichs,
}


def get_flux(name):
    try:
        return FLUXES[name]
    except KeyError:
        raise ValueError(f"unknown flux {name!r}; choose from {sorted(FLUXES)}") from None
