"""Gas states, exact oblique-shock relations and analytic initial conditions.

States are plain ``numpy`` arrays whose last axis has length 4:

* primitive ``W = (rho, u, v, p)``
* conserved ``Q = (rho, rho*u, rho*v, rho*E)``

Everything is nondimensional with a calorically perfect gas, ``GAMMA = 1.4``.
Free-stream states for shock problems use ``rho = 1`` and ``p = 1/GAMMA`` so
the upstream speed of sound is one and the velocity magnitude equals the
upstream Mach number.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidStateError, NoShockError

GAMMA = 1.4


def _first_bad(rho, p):
    bad = ~((rho > 0) & (p > 0))
    if not np.any(bad):
        return None
    return tuple(int(i) for i in np.unravel_index(np.argmax(bad), bad.shape)) if bad.ndim else ()


def check_primitive(w):
    """Raise :class:`InvalidStateError` unless every state has rho, p > 0."""
    w = np.asarray(w, dtype=float)
    rho, p = w[..., 0], w[..., 3]
    idx = _first_bad(rho, p)
    if idx is None:
        return
    raise InvalidStateError(np.asarray(rho)[idx], np.asarray(p)[idx], idx or None)


def pressure(q):
    """Pressure from conserved variables, ``p = (g-1)(rhoE - |rho u|^2/(2 rho))``."""
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    kinetic = 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2) / rho
    return (GAMMA - 1.0) * (q[..., 3] - kinetic)


def prim_to_cons(w, check=True):
    """Convert primitive ``(rho, u, v, p)`` to conserved ``(rho, rho u, rho v, rho E)``."""
    w = np.asarray(w, dtype=float)
    if check:
        check_primitive(w)
    rho, u, v, p = w[..., 0], w[..., 1], w[..., 2], w[..., 3]
    q = np.empty_like(w)
    q[..., 0] = rho
    q[..., 1] = rho * u
    q[..., 2] = rho * v
    q[..., 3] = p / (GAMMA - 1.0) + 0.5 * rho * (u * u + v * v)
    return q


def cons_to_prim(q, check=True):
    """Convert conserved to primitive variables.

    Raises
    ------
    InvalidStateError
        If any state has nonpositive density or derived pressure.
    """
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    w = np.empty_like(q)
    w[..., 0] = rho
    with np.errstate(divide="ignore", invalid="ignore"):
        w[..., 1] = q[..., 1] / rho
        w[..., 2] = q[..., 2] / rho
        w[..., 3] = (GAMMA - 1.0) * (
            q[..., 3] - 0.5 * rho * (w[..., 1] ** 2 + w[..., 2] ** 2)
        )
    if check:
        check_primitive(w)
    return w


def sound_speed(w):
    w = np.asarray(w, dtype=float)
    return np.sqrt(GAMMA * w[..., 3] / w[..., 0])


def total_enthalpy(w):
    """``H = E + p/rho`` from primitive variables."""
    w = np.asarray(w, dtype=float)
    rho, u, v, p = w[..., 0], w[..., 1], w[..., 2], w[..., 3]
    return GAMMA / (GAMMA - 1.0) * p / rho + 0.5 * (u * u + v * v)


def entropy(w):
    """Entropy function ``p / rho**GAMMA``."""
    w = np.asarray(w, dtype=float)
    return w[..., 3] / w[..., 0] ** GAMMA


# ---------------------------------------------------------------------------
# Oblique shocks


class ObliqueShock(NamedTuple):
    """Jump ratios (downstream / upstream) across an attached oblique shock."""

    mach: float
    beta: float
    deflection: float
    pressure_ratio: float
    density_ratio: float
    temperature_ratio: float
    normal_mach_upstream: float
    normal_mach_downstream: float
    downstream_mach: float


def oblique_shock_exact(mach, beta, gamma=GAMMA):
    """Rankine-Hugoniot relations for an oblique shock.

    Parameters
    ----------
    mach : float
        Upstream Mach number.
    beta : float
        Shock angle measured from the upstream flow direction, in degrees.

    Returns
    -------
    ObliqueShock
        Ratios across the shock and the flow deflection angle in degrees.

    Raises
    ------
    NoShockError
        If ``mach * sin(beta) <= 1``.
    """
    b = np.radians(beta)
    mn1 = mach * np.sin(b)
    if not mn1 > 1.0:
        raise NoShockError(
            f"normal Mach number {mn1:.6g} <= 1 (mach={mach}, beta={beta})"
        )
    mn1_sq = mn1 * mn1
    pr = 1.0 + 2.0 * gamma / (gamma + 1.0) * (mn1_sq - 1.0)
    rr = (gamma + 1.0) * mn1_sq / ((gamma - 1.0) * mn1_sq + 2.0)
    mn2 = np.sqrt((1.0 + 0.5 * (gamma - 1.0) * mn1_sq)
                  / (gamma * mn1_sq - 0.5 * (gamma - 1.0)))
    tan_theta = (2.0 / np.tan(b) * (mn1_sq - 1.0)
                 / (mach * mach * (gamma + np.cos(2.0 * b)) + 2.0))
    theta = np.arctan(tan_theta)
    m2 = mn2 / np.sin(b - theta)
    return ObliqueShock(
        mach=float(mach),
        beta=float(beta),
        deflection=float(np.degrees(theta)),
        pressure_ratio=float(pr),
        density_ratio=float(rr),
        temperature_ratio=float(pr / rr),
        normal_mach_upstream=float(mn1),
        normal_mach_downstream=float(mn2),
        downstream_mach=float(m2),
    )


def mach_for_pressure_ratio(pressure_ratio, beta, gamma=GAMMA):
    """Upstream Mach number giving ``pressure_ratio`` across a shock at ``beta``."""
    if not pressure_ratio > 1.0:
        raise NoShockError(f"pressure ratio {pressure_ratio} must exceed 1")
    mn_sq = 1.0 + (pressure_ratio - 1.0) * (gamma + 1.0) / (2.0 * gamma)
    return float(np.sqrt(mn_sq) / np.sin(np.radians(beta)))


def _cos_sin(angle):
    """``(cos, sin)`` of an angle in degrees, exact at multiples of 90."""
    quarter = angle / 90.0
    if quarter == round(quarter):
        return [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][int(round(quarter)) % 4]
    a = np.radians(angle)
    return float(np.cos(a)), float(np.sin(a))


@dataclass(frozen=True)
class ShockSpec:
    """A straight oblique shock placed in the computational plane.

    Angles are in degrees, counterclockwise from the +x grid axis.  The
    upstream flow travels at ``flow_angle``; the shock line is inclined at
    ``flow_angle + beta`` to the grid.  ``p1`` and ``p2`` are the segment
    endpoints and must be parallel to that inclination.
    """

    mach: float
    beta: float
    flow_angle: float
    p1: tuple
    p2: tuple

    def __post_init__(self):
        if not self.mach * np.sin(np.radians(self.beta)) > 1.0:
            raise NoShockError(
                f"mach*sin(beta) <= 1 (mach={self.mach}, beta={self.beta})"
            )
        d = np.subtract(self.p2, self.p1).astype(float)
        length = np.hypot(*d)
        if length == 0.0:
            raise ValueError("shock endpoints coincide")
        t = self.tangent
        if abs(d[0] * t[1] - d[1] * t[0]) > 1e-9 * length:
            raise ValueError(
                "shock endpoints are not inclined at flow_angle + beta "
                f"({self.line_angle} deg)"
            )

    @classmethod
    def through(cls, point, mach, beta, flow_angle, box):
        """Shock through ``point`` clipped to ``box = ((x0, x1), (y0, y1))``."""
        t = np.array(_cos_sin(flow_angle + beta))
        p = np.asarray(point, dtype=float)
        (x0, x1), (y0, y1) = box
        lo, hi = -np.inf, np.inf
        for axis, (a, b) in enumerate(((x0, x1), (y0, y1))):
            if t[axis] == 0.0:
                continue
            s0, s1 = sorted(((a - p[axis]) / t[axis], (b - p[axis]) / t[axis]))
            lo, hi = max(lo, s0), min(hi, s1)
        if not hi > lo:
            raise ValueError("shock line does not cross the box")
        return cls(mach, beta, flow_angle,
                   tuple(float(c) for c in p + lo * t),
                   tuple(float(c) for c in p + hi * t))

    @property
    def line_angle(self):
        return self.flow_angle + self.beta

    @property
    def tangent(self):
        return np.array(_cos_sin(self.line_angle))

    @property
    def downstream_normal(self):
        """Unit normal to the shock pointing into the downstream region."""
        c, s = _cos_sin(self.line_angle)
        return np.array([s, -c])

    def signed_distance(self, points):
        """Distance from the shock line, positive on the downstream side."""
        points = np.asarray(points, dtype=float)
        return (points - np.asarray(self.p1)) @ self.downstream_normal

    def relations(self):
        return oblique_shock_exact(self.mach, self.beta)

    def states(self):
        """Upstream and downstream primitive states ``(W1, W2)``."""
        rel = self.relations()
        cu, su = _cos_sin(self.flow_angle)
        down_dir = np.radians(self.flow_angle + rel.deflection)
        rho1, p1 = 1.0, 1.0 / GAMMA
        w1 = np.array([rho1, self.mach * cu, self.mach * su, p1])
        rho2 = rho1 * rel.density_ratio
        p2 = p1 * rel.pressure_ratio
        a2 = np.sqrt(GAMMA * p2 / rho2)
        speed2 = rel.downstream_mach * a2
        w2 = np.array([rho2, speed2 * np.cos(down_dir),
                       speed2 * np.sin(down_dir), p2])
        return w1, w2


def shock_field_at(spec, points):
    """Exact piecewise-constant field at ``points`` (shape ``(..., 2)``).

    Points on the shock line itself are assigned the downstream state.
    """
    w1, w2 = spec.states()
    down = spec.signed_distance(points) >= 0.0
    return np.where(down[..., None], w2, w1)


def shock_field(spec, mesh):
    """Exact solution sampled at the mesh cell centers, shape ``(nx, ny, 4)``."""
    return shock_field_at(spec, mesh.centers)


# ---------------------------------------------------------------------------
# Isentropic vortex

VORTEX_FREESTREAM = np.array([1.0, 1.0, 0.0, 1.0])
VORTEX_BOX = ((-5.0, 5.0), (-5.0, 5.0))


def isentropic_vortex_state(x, y, t=0.0, strength=5.0, center=(0.0, 0.0),
                            freestream=VORTEX_FREESTREAM, box=VORTEX_BOX):
    """Isentropic vortex convected by the free stream in a periodic box.

    The perturbation is the usual Gaussian-profile vortex: with
    ``r`` the distance from the (translated, wrapped) vortex center,

    * ``du = -b/(2 pi) (y - yc) exp((1 - r^2)/2)``
    * ``dv = +b/(2 pi) (x - xc) exp((1 - r^2)/2)``
    * ``T = T_inf - (g - 1) b^2 / (8 g pi^2) exp(1 - r^2)``

    and density and pressure follow from ``p/rho^g`` being constant.
    Returns primitive states with shape ``broadcast(x, y).shape + (4,)``.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    rho_inf, u_inf, v_inf, p_inf = freestream
    (x0, x1), (y0, y1) = box
    lx, ly = x1 - x0, y1 - y0
    xc = center[0] + u_inf * t
    yc = center[1] + v_inf * t
    dx = np.mod(x - xc - x0, lx) + x0
    dy = np.mod(y - yc - y0, ly) + y0
    r2 = dx * dx + dy * dy
    bump = np.exp(0.5 * (1.0 - r2))
    t_inf = p_inf / rho_inf
    s_inf = p_inf / rho_inf ** GAMMA
    temp = t_inf - (GAMMA - 1.0) * strength ** 2 / (8.0 * GAMMA * np.pi ** 2) * bump ** 2
    rho = (temp / s_inf) ** (1.0 / (GAMMA - 1.0))
    w = np.empty(x.shape + (4,))
    w[..., 0] = rho
    w[..., 1] = u_inf - strength / (2.0 * np.pi) * dy * bump
    w[..., 2] = v_inf + strength / (2.0 * np.pi) * dx * bump
    w[..., 3] = rho * temp
    return w
