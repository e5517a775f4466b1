import numpy as np
import pytest

from tcfv.boundary import BoundaryClosure, Dirichlet, Extrapolate, SlipWall
from tcfv.errors import ConfigurationError, ContractError, DivergedSolutionError
from tcfv.gasdyn import (ShockSpec, cons_to_prim, isentropic_vortex_state, prim_to_cons,
                         shock_field, shock_field_at)
from tcfv.marching import (STEADY, UNSTEADY, Discretization, MarchSettings, advance,
                           assemble_residual, lusgs_increment, lusgs_step, march_to_steady,
                           residual_norm, stable_time_step, tvd_rk3_step)
from tcfv.mesh import build_ramp_mesh, build_uniform_mesh
from tcfv.recon import TroubleMask

from conftest import random_states


def vortex_setup(n=24, backend="compiled", flux="ausm+"):
    mesh = build_uniform_mesh((-5, 5), (-5, 5), n, n)
    disc = Discretization(mesh, BoundaryClosure.periodic(mesh), flux=flux, backend=backend)
    w = isentropic_vortex_state(mesh.centers[..., 0], mesh.centers[..., 1])
    return mesh, disc, prim_to_cons(w)


def shock_setup(n=24, flux="ausm+", order=2):
    mesh = build_uniform_mesh((0, 1), (0, 1), n, n)
    spec = ShockSpec.through((0.5, 0.5), 3.0, 30.0, 60.0, ((0, 1), (0, 1)))

    def exact(pts, t):
        return shock_field_at(spec, pts)

    closure = BoundaryClosure(mesh, Dirichlet(exact), Dirichlet(exact), Dirichlet(exact),
                              Extrapolate())
    return mesh, spec, Discretization(mesh, closure, flux=flux, order=order)


@pytest.mark.parametrize("flux", ["ausm+", "lax-friedrichs"])
@pytest.mark.parametrize("order", [1, 2])
def test_compiled_matches_numpy(rng, flux, order):
    mesh, disc, q = vortex_setup(16, flux=flux)
    ref = Discretization(mesh, disc.closure, flux=flux, order=order, backend="numpy")
    disc = Discretization(mesh, disc.closure, flux=flux, order=order)
    q = q * (1 + 0.05 * rng.standard_normal(q.shape[:2]))[..., None]
    flags = rng.random(mesh.shape) < 0.4
    np.testing.assert_allclose(assemble_residual(q, disc, flags),
                               assemble_residual(q, ref, flags), rtol=1e-12, atol=1e-13)


def test_compiled_matches_numpy_on_skewed_mesh(rng):
    mesh = build_ramp_mesh(40, 21, 10, 10, 12)
    closure = BoundaryClosure(mesh, Extrapolate(), Extrapolate(), SlipWall(), Extrapolate())
    w = random_states(rng, mesh.shape)
    q = prim_to_cons(w)
    flags = rng.random(mesh.shape) < 0.5
    a = assemble_residual(q, Discretization(mesh, closure), flags)
    b = assemble_residual(q, Discretization(mesh, closure, backend="numpy"), flags)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("mask", ["everywhere", "nowhere", "random"])
def test_freestream_preservation(rng, mask):
    mesh = build_ramp_mesh(30, 12.77, 8, 8, 10)
    w_inf = np.array([1.0, 3.0, 0.0, 1 / 1.4])
    closure = BoundaryClosure(mesh, Dirichlet(w_inf), Extrapolate(), Dirichlet(w_inf),
                              Dirichlet(w_inf))
    disc = Discretization(mesh, closure)
    flags = {"everywhere": np.ones(mesh.shape, bool), "nowhere": np.zeros(mesh.shape, bool),
             "random": rng.random(mesh.shape) < 0.5}[mask]
    q = prim_to_cons(np.broadcast_to(w_inf, mesh.shape + (4,)))
    res = assemble_residual(q, disc, flags)
    assert residual_norm(res, mesh) < 1e-12
    assert np.abs(q + lusgs_increment(q, res, disc, 1.0) - q).max() < 1e-12
    dt = stable_time_step(q, disc, 0.3)
    assert np.abs(tvd_rk3_step(q, dt, disc, flags) - q).max() < 1e-12


def test_exact_shock_residual_is_local():
    mesh, spec, disc = shock_setup(30)
    q = prim_to_cons(shock_field(spec, mesh))
    res = assemble_residual(q, disc, TroubleMask.everywhere(mesh.shape))
    far = np.abs(mesh.centers[..., 0] - 0.5) > 3.5 / 30
    assert np.abs(res[far]).max() < 1e-10
    assert np.abs(res[~far]).max() > 1e-3


def test_conservation_telescopes(rng):
    mesh, disc, q = vortex_setup(20)
    res = assemble_residual(q, disc, rng.random(mesh.shape) < 0.5)
    # periodic: every face appears twice with opposite signs
    assert np.abs(res.sum(axis=(0, 1))).max() < 1e-12


def test_rk3_conserves_mass_per_step():
    mesh, disc, q = vortex_setup(24)
    flags = np.zeros(mesh.shape, bool)
    total = lambda s: (s * mesh.volumes[..., None]).sum(axis=(0, 1))
    q0 = total(q)
    for _ in range(5):
        q = tvd_rk3_step(q, stable_time_step(q, disc, 0.3), disc, flags)
        np.testing.assert_allclose(total(q), q0, rtol=0, atol=1e-12 * np.abs(q0).max())


def test_residual_norm_examples():
    assert residual_norm(np.zeros((3, 3, 4)), np.ones((3, 3))) == 0.0
    r = np.zeros((1, 1, 4))
    r[0, 0, 0] = 1.0
    assert residual_norm(r, np.array([[2.0]])) == pytest.approx(np.sqrt(2.0))
    r = np.random.default_rng(1).standard_normal((4, 5, 4))
    vol = np.full((4, 5), 0.3)
    assert residual_norm(-2.5 * r, vol) == pytest.approx(2.5 * residual_norm(r, vol))


def test_lusgs_direction_matches_explicit_update():
    mesh, disc, q = vortex_setup(20)
    flags = np.zeros(mesh.shape, bool)
    res = assemble_residual(q, disc, flags)
    explicit = -res / mesh.volumes[..., None]
    for cfl in (1e-4, 1e-2, 1.0):
        dq = lusgs_increment(q, res, disc, cfl)
        assert np.sum(dq * explicit) > 0
    dq = lusgs_increment(q, res, disc, 1e-6)
    w = cons_to_prim(q)
    dt = 1e-6 * mesh.volumes / disc.wave_sum(w)
    np.testing.assert_allclose(dq, dt[..., None] * explicit, rtol=1e-3,
                               atol=1e-9 * np.abs(dq).max())


def test_steady_march_on_exact_uniform_field():
    mesh = build_uniform_mesh((0, 1), (0, 1), 8, 8)
    w_inf = np.array([1.0, 2.0, 0.5, 1.0])
    closure = BoundaryClosure(mesh, Dirichlet(w_inf), Extrapolate(), Dirichlet(w_inf),
                              Extrapolate())
    q = prim_to_cons(np.broadcast_to(w_inf, mesh.shape + (4,)))
    r = march_to_steady(Discretization(mesh, closure), q, np.ones(mesh.shape, bool))
    assert r.converged and r.iterations == 1 and len(r.history) == 1


def test_history_length_and_callback():
    mesh, spec, disc = shock_setup(16, order=1)
    q = prim_to_cons(shock_field(spec, mesh))
    seen = []
    settings = MarchSettings(max_iterations=25)
    r = march_to_steady(disc, q, TroubleMask.nowhere(mesh.shape), settings,
                        lambda it, rn: seen.append((it, rn)))
    assert not r.converged
    assert r.iterations == 25 == len(r.history) == len(seen)
    assert seen[0][0] == 1 and seen[-1][1] == r.history[-1]


def test_first_order_shock_converges():
    mesh, spec, disc = shock_setup(16, flux="lax-friedrichs", order=1)
    q = prim_to_cons(shock_field(spec, mesh))
    r = march_to_steady(disc, q, TroubleMask.nowhere(mesh.shape),
                        MarchSettings(max_iterations=3000, convergence_tol=1e-12))
    assert r.converged
    assert r.history[-1] < 1e-12 < r.history[0]


def test_advance_lands_on_final_time():
    mesh, disc, q = vortex_setup(12)
    steps = []
    r = advance(disc, q, 0.37, np.zeros(mesh.shape, bool),
                callback=lambda s, t, q: steps.append(t))
    assert r.time == 0.37 and steps[-1] == 0.37
    assert len(r.history) == r.steps == len(steps)
    assert np.all(np.diff(steps) > 0)


def test_advance_with_mask_provider():
    mesh, disc, q = vortex_setup(12)
    calls = []

    def provider(step, state, t):
        calls.append(step)
        return np.ones(mesh.shape, bool)

    r = advance(disc, q, 0.2, provider)
    assert calls == list(range(r.steps))


def test_settings_validation():
    assert MarchSettings().cfl == 1.0
    assert MarchSettings(scheme=UNSTEADY).cfl == 0.3
    with pytest.raises(ConfigurationError):
        MarchSettings(scheme="euler")
    with pytest.raises(ConfigurationError):
        MarchSettings(max_iterations=0)
    mesh, disc, q = vortex_setup(8)
    with pytest.raises(ConfigurationError):
        lusgs_step(q, disc, np.zeros(mesh.shape, bool), MarchSettings(scheme=UNSTEADY))
    with pytest.raises(ConfigurationError):
        advance(disc, q, 1.0, np.zeros(mesh.shape, bool), MarchSettings(scheme=STEADY))
    with pytest.raises(ContractError):
        assemble_residual(q, disc, np.zeros((3, 3), bool))


def test_divergence_reports_cell():
    mesh, disc, q = vortex_setup(8)
    bad = q.copy()
    bad[3, 4, 3] = 0.0  # zero energy -> negative pressure
    with pytest.raises(DivergedSolutionError) as err:
        lusgs_step(bad, disc, np.zeros(mesh.shape, bool), MarchSettings())
    assert err.value.cell == (3, 4)
