"""Compiled face loops for the residual.

Same arithmetic as the array code in ``recon`` and ``flux``; a cross-check
test keeps the two paths in agreement.
"""

from __future__ import annotations

import numba
import numpy as np

from .gasdyn import GAMMA
from .flux import AUSM_ALPHA, AUSM_BETA
from .recon import SMALL_DIFF

AUSM = 0
LAX_FRIEDRICHS = 1
FLUX_IDS = {"ausm+": AUSM, "lax-friedrichs": LAX_FRIEDRICHS}

_G1 = GAMMA - 1.0
_HFAC = GAMMA / (GAMMA - 1.0)
_CRIT = 2.0 * (GAMMA - 1.0) / (GAMMA + 1.0)


@numba.njit(cache=True, inline="always")
def _phi(dm, dp, w0):
    prod = dp * dm
    eps = SMALL_DIFF * max(1.0, abs(w0))
    if prod > 0.0 and not (abs(dm) < eps and abs(dp) < eps):
        return 3.0 * prod / (2.0 * dp * dp - prod + 2.0 * dm * dm)
    return 0.0


@numba.njit(cache=True, inline="always")
def _face_state(out, wg, i, j, si, sj, limited, k, east):
    """East (``east=True``) or west face value of padded cell ``(i, j)``.

    ``(si, sj)`` is the unit index step along the reconstruction direction.
    """
    for c in range(4):
        w0 = wg[i, j, c]
        dm = w0 - wg[i - si, j - sj, c]
        dp = wg[i + si, j + sj, c] - w0
        if east:
            inc = 0.25 * ((1.0 - k) * dm + (1.0 + k) * dp)
        else:
            inc = -0.25 * ((1.0 + k) * dm + (1.0 - k) * dp)
        if limited:
            inc = _phi(dm, dp, w0) * inc
        out[c] = w0 + inc
    if out[0] <= 0.0 or out[3] <= 0.0:
        for c in range(4):
            out[c] = wg[i, j, c]


@numba.njit(cache=True, inline="always")
def _split_mach_plus(m):
    if abs(m) < 1.0:
        q = (m * m - 1.0)
        return 0.25 * (m + 1.0) * (m + 1.0) + AUSM_BETA * q * q
    return 0.5 * (m + abs(m))


@numba.njit(cache=True, inline="always")
def _split_mach_minus(m):
    if abs(m) < 1.0:
        q = (m * m - 1.0)
        return -0.25 * (m - 1.0) * (m - 1.0) - AUSM_BETA * q * q
    return 0.5 * (m - abs(m))


@numba.njit(cache=True, inline="always")
def _split_p_plus(m):
    if abs(m) < 1.0:
        q = (m * m - 1.0)
        return 0.25 * (m + 1.0) * (m + 1.0) * (2.0 - m) + AUSM_ALPHA * m * q * q
    return 1.0 if m > 0.0 else 0.0


@numba.njit(cache=True, inline="always")
def _split_p_minus(m):
    if abs(m) < 1.0:
        q = (m * m - 1.0)
        return 0.25 * (m - 1.0) * (m - 1.0) * (2.0 + m) - AUSM_ALPHA * m * q * q
    return 1.0 if m < 0.0 else 0.0


@numba.njit(cache=True, inline="always")
def _ausm(out, wl, wr, nx, ny):
    rl, ul, vl, pl = wl[0], wl[1], wl[2], wl[3]
    rr, ur, vr, pr = wr[0], wr[1], wr[2], wr[3]
    unl = ul * nx + vl * ny
    unr = ur * nx + vr * ny
    hl = _HFAC * pl / rl + 0.5 * (ul * ul + vl * vl)
    hr = _HFAC * pr / rr + 0.5 * (ur * ur + vr * vr)
    asl = np.sqrt(_CRIT * hl)
    asr = np.sqrt(_CRIT * hr)
    a_l = asl * asl / max(asl, unl)
    a_r = asr * asr / max(asr, -unr)
    a = min(a_l, a_r)
    ml = unl / a
    mr = unr / a
    m = _split_mach_plus(ml) + _split_mach_minus(mr)
    p = _split_p_plus(ml) * pl + _split_p_minus(mr) * pr
    fl = a * 0.5 * (m + abs(m)) * rl
    fr = a * 0.5 * (m - abs(m)) * rr
    out[0] = fl + fr
    out[1] = fl * ul + fr * ur + p * nx
    out[2] = fl * vl + fr * vr + p * ny
    out[3] = fl * hl + fr * hr


@numba.njit(cache=True, inline="always")
def _lax_friedrichs(out, wl, wr, nx, ny):
    rl, ul, vl, pl = wl[0], wl[1], wl[2], wl[3]
    rr, ur, vr, pr = wr[0], wr[1], wr[2], wr[3]
    unl = ul * nx + vl * ny
    unr = ur * nx + vr * ny
    lam = max(abs(unl) + np.sqrt(GAMMA * pl / rl), abs(unr) + np.sqrt(GAMMA * pr / rr))
    hl = _HFAC * pl / rl + 0.5 * (ul * ul + vl * vl)
    hr = _HFAC * pr / rr + 0.5 * (ur * ur + vr * vr)
    el = pl / _G1 + 0.5 * rl * (ul * ul + vl * vl)
    er = pr / _G1 + 0.5 * rr * (ur * ur + vr * vr)
    ml, mr = rl * unl, rr * unr
    out[0] = 0.5 * (ml + mr) - 0.5 * lam * (rr - rl)
    out[1] = 0.5 * (ml * ul + pl * nx + mr * ur + pr * nx) - 0.5 * lam * (rr * ur - rl * ul)
    out[2] = 0.5 * (ml * vl + pl * ny + mr * vr + pr * ny) - 0.5 * lam * (rr * vr - rl * vl)
    out[3] = 0.5 * (ml * hl + mr * hr) - 0.5 * lam * (er - el)


@numba.njit(cache=True)
def face_fluxes(wg, fg, normals, lengths, axis, order, k, flux_id):
    """Fluxes times face length on all faces normal to ``axis``.

    ``wg`` carries two ghost layers, ``fg`` one layer of limiter flags.
    """
    n_i, n_j = normals.shape[0], normals.shape[1]
    si, sj = (1, 0) if axis == 0 else (0, 1)
    out = np.empty((n_i, n_j, 4))
    wl = np.empty(4)
    wr = np.empty(4)
    f = np.empty(4)
    for i in range(n_i):
        for j in range(n_j):
            # padded indices of the cells before (l) and after (r) the face
            if axis == 0:
                li, lj = i + 1, j + 2
            else:
                li, lj = i + 2, j + 1
            ri, rj = li + si, lj + sj
            if order == 1:
                for c in range(4):
                    wl[c] = wg[li, lj, c]
                    wr[c] = wg[ri, rj, c]
            else:
                _face_state(wl, wg, li, lj, si, sj, fg[li - 1, lj - 1], k, True)
                _face_state(wr, wg, ri, rj, si, sj, fg[ri - 1, rj - 1], k, False)
            nx, ny = normals[i, j, 0], normals[i, j, 1]
            if flux_id == AUSM:
                _ausm(f, wl, wr, nx, ny)
            else:
                _lax_friedrichs(f, wl, wr, nx, ny)
            s = lengths[i, j]
            for c in range(4):
                out[i, j, c] = f[c] * s
    return out
