"""Test-case definitions: meshes, exact solutions, boundary closures and masks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..boundary import BoundaryClosure, Dirichlet, Extrapolate, SlipWall, Split
from ..errors import ConfigurationError
from ..gasdyn import (ShockSpec, isentropic_vortex_state, mach_for_pressure_ratio,
                      oblique_shock_exact, shock_field_at)
from ..marching import (STEADY, UNSTEADY, Discretization, MarchSettings,
                        solve_steady, to_primitive)
from ..mesh import build_ramp_mesh, build_sheared_mesh, build_uniform_mesh
from ..metrics import extract_profile, extract_row
from ..recon import TroubleMask
from ..troubled import detect_troubled, label_aligned, label_nonaligned

TIER_CELLS = {"coarse": 100, "medium": 200, "fine": 400}
# Double Mach reflection on the sheared mesh needs nx divisible by 24 so that
# the incident shock foot x = 1/6 falls on a grid line.
DMR_ALIGNED_TIERS = {"coarse": (384, 96), "medium": (768, 192), "fine": (1536, 384)}

DMR_PRE = np.array([1.4, 0.0, 0.0, 1.0])
DMR_POST = np.array([8.0, 8.25 * np.cos(np.radians(30.0)),
                     -8.25 * np.sin(np.radians(30.0)), 116.5])
DMR_FOOT = 1.0 / 6.0
DMR_SHOCK_SPEED = 10.0
DMR_BOX = ((0.0, 4.0), (0.0, 1.0))


@dataclass
class Case:
    """All inputs for one run.

    For steady cases ``mask`` is fixed; unsteady cases may instead supply
    ``mask_provider(step, q, t)``.  ``w_exact`` is the reference field the
    final solution is compared with (``None`` if there is none).
    """

    cfg: object
    mesh: object
    disc: Discretization
    settings: MarchSettings
    w0: np.ndarray
    w_exact: np.ndarray | None
    mask: TroubleMask | None = None
    mask_provider: Callable | None = None
    spec: ShockSpec | None = None
    profile: Callable | None = None
    window_args: dict = field(default_factory=dict)
    t_final: float | None = None
    bootstrap: object = None

    @property
    def unsteady(self):
        return self.settings.scheme == UNSTEADY


def _square_counts(cfg, aspect=1):
    if cfg.nx is not None:
        return cfg.nx, cfg.ny
    n = TIER_CELLS[cfg.grid]
    return aspect * n, n


def _settings(cfg, scheme):
    return MarchSettings(scheme=scheme, cfl=cfg.cfl, max_iterations=cfg.max_iterations,
                         convergence_tol=cfg.tol)


def _exact_bc(spec):
    def state(points, t):
        return shock_field_at(spec, points)
    return Dirichlet(state)


def _steady_mask(cfg, mesh, disc, w0, settings, labeler, boot_flux):
    """Mask and initial field for a steady run.

    In indicator mode a first-order solution (flux ``boot_flux`` unless the
    config names one) is converged, the indicator is evaluated on it, and it
    becomes the initial field of the second-order run.
    """
    if cfg.limiting == "everywhere":
        return TroubleMask.everywhere(mesh.shape), None, w0
    if cfg.limiting == "none":
        return TroubleMask.nowhere(mesh.shape), None, w0
    if cfg.limiting == "config":
        return labeler(cfg.config), None, w0
    boot_disc = Discretization(mesh, disc.closure, flux=cfg.bootstrap_flux or boot_flux,
                               order=1)
    boot = solve_steady(boot_disc, w0, TroubleMask.nowhere(mesh.shape), settings)
    mask = detect_troubled(boot.q[..., 0], cfg.threshold)
    return mask, boot, boot.q


def _build_aligned_oblique(cfg):
    mach = 3.0 if cfg.mach is None else cfg.mach
    beta = 30.0 if cfg.beta is None else cfg.beta
    nx, ny = _square_counts(cfg)
    if nx % 2:
        raise ConfigurationError(f"nx: must be even so the shock lies on x = 0.5, got {nx}")
    mesh = build_uniform_mesh((0.0, 1.0), (0.0, 1.0), nx, ny)
    # rotate the upstream flow so the shock is the vertical line x = 0.5
    spec = ShockSpec.through((0.5, 0.5), mach, beta, 90.0 - beta, ((0.0, 1.0), (0.0, 1.0)))
    exact = _exact_bc(spec)
    closure = BoundaryClosure(mesh, west=exact, east=exact, south=exact,
                              north=Extrapolate())
    disc = Discretization(mesh, closure, flux=cfg.flux, order=cfg.order)
    settings = _settings(cfg, STEADY)
    w_exact = shock_field_at(spec, mesh.centers)
    shock_col = nx // 2
    mask, boot, w0 = _steady_mask(
        cfg, mesh, disc, w_exact, settings,
        lambda c: label_aligned(mesh, shock_col, c), "lax-friedrichs")
    return Case(cfg, mesh, disc, settings, w0, w_exact, mask=mask, spec=spec,
                profile=lambda w: extract_profile(w, mesh, cfg.y_line, w_exact),
                window_args={"shock_x": 0.5, "upstream": "low"}, bootstrap=boot)


def nonaligned_shock_x(spec, y):
    """``x`` where the shock line crosses height ``y``."""
    t = spec.tangent
    if t[1] == 0.0:
        raise ConfigurationError("a horizontal shock never crosses the sampling line")
    return float(spec.p1[0] + (y - spec.p1[1]) * t[0] / t[1])


def _build_nonaligned_oblique(cfg):
    mach = 3.0 if cfg.mach is None else cfg.mach
    beta = 30.0 if cfg.beta is None else cfg.beta
    flow = 0.0 if cfg.flow_angle is None else cfg.flow_angle
    anchor = 1.0 if cfg.anchor_x is None else cfg.anchor_x
    nx, ny = _square_counts(cfg, aspect=4)
    box = ((0.0, 4.0), (0.0, 1.0))
    mesh = build_uniform_mesh(*box, nx, ny)
    spec = ShockSpec.through((anchor, 0.0), mach, beta, flow, box)
    exact = _exact_bc(spec)
    closure = BoundaryClosure(mesh, west=exact, east=Extrapolate(), south=exact,
                              north=exact)
    disc = Discretization(mesh, closure, flux=cfg.flux, order=cfg.order)
    settings = _settings(cfg, STEADY)
    w_exact = shock_field_at(spec, mesh.centers)
    mask, boot, w0 = _steady_mask(
        cfg, mesh, disc, w_exact, settings,
        lambda c: label_nonaligned(mesh, spec, c), "ausm+")
    upstream = "low" if spec.downstream_normal[0] > 0 else "high"
    return Case(cfg, mesh, disc, settings, w0, w_exact, mask=mask, spec=spec,
                profile=lambda w: extract_profile(w, mesh, cfg.y_line, w_exact),
                window_args={"shock_x": nonaligned_shock_x(spec, cfg.y_line),
                             "upstream": upstream},
                bootstrap=boot)


def _build_ramp(cfg):
    mach = 3.0 if cfg.mach is None else cfg.mach
    beta = 30.0 if cfg.beta is None else cfg.beta
    turn = oblique_shock_exact(mach, beta).deflection
    nx, ny = _square_counts(cfg)
    nx1 = nx // 2
    mesh = build_ramp_mesh(beta, turn, nx1, nx - nx1, ny)
    v = mesh.vertices
    box = ((v[..., 0].min() - 1.0, v[..., 0].max() + 1.0),
           (v[..., 1].min() - 1.0, v[..., 1].max() + 1.0))
    spec = ShockSpec.through(tuple(v[nx1, 0]), mach, beta, 0.0, box)
    exact = _exact_bc(spec)
    closure = BoundaryClosure(mesh, west=exact, east=exact, south=SlipWall(),
                              north=exact)
    disc = Discretization(mesh, closure, flux=cfg.flux, order=cfg.order)
    settings = _settings(cfg, STEADY)
    w_exact = shock_field_at(spec, mesh.centers)
    mask, boot, w0 = _steady_mask(
        cfg, mesh, disc, w_exact, settings,
        lambda c: label_aligned(mesh, nx1, c), "lax-friedrichs")
    row = ny // 2
    return Case(cfg, mesh, disc, settings, w0, w_exact, mask=mask, spec=spec,
                profile=lambda w: extract_row(w, mesh, row, w_exact),
                window_args={"split": nx1, "upstream": "low"}, bootstrap=boot)


def _build_vortex(cfg):
    nx, ny = _square_counts(cfg)
    mesh = build_uniform_mesh((-5.0, 5.0), (-5.0, 5.0), nx, ny)
    closure = BoundaryClosure.periodic(mesh)
    disc = Discretization(mesh, closure, flux=cfg.flux, order=cfg.order)
    t_final = 20.0 if cfg.t_final is None else cfg.t_final
    xc, yc = mesh.centers[..., 0], mesh.centers[..., 1]
    w0 = isentropic_vortex_state(xc, yc, 0.0)
    w_exact = isentropic_vortex_state(xc, yc, t_final)
    if cfg.limiting == "everywhere":
        mask = TroubleMask.everywhere(mesh.shape)
        provider = None
    elif cfg.limiting == "none":
        mask = TroubleMask.nowhere(mesh.shape)
        provider = None
    elif cfg.limiting == "indicator":
        mask = None
        provider = _indicator_provider(cfg.threshold, periodic=(True, True))
    else:
        raise ConfigurationError("limiting: the vortex has no shock to label")
    return Case(cfg, mesh, disc, _settings(cfg, UNSTEADY), w0, w_exact, mask=mask,
                mask_provider=provider, t_final=t_final)


def _indicator_provider(threshold, periodic=(False, False), first=None):
    def provider(step, q, t):
        mask = detect_troubled(to_primitive(q)[..., 0], threshold, periodic)
        if step == 0 and first is not None:
            mask = mask | first
        return mask.flags
    return provider


def dmr_exact(points, t):
    """Incident-shock solution of the double Mach reflection problem."""
    x, y = points[..., 0], points[..., 1]
    x_shock = DMR_FOOT + (y + DMR_SHOCK_SPEED * t) / np.sqrt(3.0)
    return np.where((x < x_shock)[..., None], DMR_POST, DMR_PRE)


def dmr_shock_spec():
    """The initial incident shock as a line, downstream side to the upper left."""
    top = (DMR_FOOT + 1.0 / np.sqrt(3.0), 1.0)
    return ShockSpec(mach=10.0, beta=90.0, flow_angle=150.0,
                     p1=(DMR_FOOT, 0.0), p2=top)


def _build_dmr(cfg):
    aligned = cfg.case == "dmr-aligned"
    if aligned:
        nx, ny = (cfg.nx, cfg.ny) if cfg.nx is not None else DMR_ALIGNED_TIERS[cfg.grid]
        if nx % 24:
            raise ConfigurationError(f"nx: must be divisible by 24 for dmr-aligned, got {nx}")
        mesh = build_sheared_mesh(*DMR_BOX, nx, ny, 60.0)
    else:
        nx, ny = _square_counts(cfg, aspect=4)
        mesh = build_uniform_mesh(*DMR_BOX, nx, ny)
    south = Split(lambda mid: mid[..., 0] < DMR_FOOT, Dirichlet(DMR_POST), SlipWall())
    closure = BoundaryClosure(mesh, west=Dirichlet(DMR_POST), east=Extrapolate(),
                              south=south, north=Dirichlet(dmr_exact))
    disc = Discretization(mesh, closure, flux=cfg.flux, order=cfg.order)
    w0 = dmr_exact(mesh.centers, 0.0)
    t_final = 0.2 if cfg.t_final is None else cfg.t_final
    spec = dmr_shock_spec()
    if cfg.limiting == "everywhere":
        mask, provider = TroubleMask.everywhere(mesh.shape), None
    else:
        config = cfg.config or ("33" if aligned else "44")
        threshold = cfg.threshold or 0.05
        if aligned:
            first = label_aligned(mesh, nx // 24, config, pre_side="high")
        else:
            first = label_nonaligned(mesh, spec, config)
        mask, provider = None, _indicator_provider(threshold, first=first)
    return Case(cfg, mesh, disc, _settings(cfg, UNSTEADY), w0, None, mask=mask,
                mask_provider=provider, spec=spec, t_final=t_final)


_BUILDERS = {
    "aligned-oblique": _build_aligned_oblique,
    "nonaligned-oblique": _build_nonaligned_oblique,
    "aligned-ramp": _build_ramp,
    "isentropic-vortex": _build_vortex,
    "dmr-aligned": _build_dmr,
    "dmr-nonaligned": _build_dmr,
}


def build_case(cfg):
    """Assemble mesh, closure, initial field, reference and mask for ``cfg``."""
    return _BUILDERS[cfg.case](cfg)


def pressure_ratio_table(angles=(30.0, 40.0, 50.0), reference_mach=3.0):
    """Upstream Mach numbers matching the pressure ratios of a reference Mach.

    The reference Mach number at each angle fixes one pressure ratio; every
    angle is then paired with every ratio.  Rows are
    ``(beta, k, mach, pressure_ratio)`` with ``k`` numbering the ratios in
    ascending order.
    """
    ratios = sorted(oblique_shock_exact(reference_mach, b).pressure_ratio for b in angles)
    rows = []
    for beta in angles:
        for k, pr in enumerate(ratios, start=1):
            mach = mach_for_pressure_ratio(pr, beta)
            rows.append((float(beta), k, float(mach),
                         float(oblique_shock_exact(mach, beta).pressure_ratio)))
    return rows
