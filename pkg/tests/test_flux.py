import numpy as np
import pytest
from hypothesis import given

from tcfv.flux import ausm_plus, get_flux, lax_friedrichs, physical_flux, spectral_radius
from tcfv.gasdyn import GAMMA, prim_to_cons

from conftest import primitive_states, random_states, unit_normals

FLUXES = [ausm_plus, lax_friedrichs]


def rotate_state(w, a):
    c, s = np.cos(a), np.sin(a)
    out = w.copy()
    out[..., 1] = c * w[..., 1] - s * w[..., 2]
    out[..., 2] = s * w[..., 1] + c * w[..., 2]
    return out


def test_physical_flux_example():
    np.testing.assert_allclose(physical_flux([1, 1, 0, 1], [1, 0]), [1, 2, 0, 4.0])


@given(primitive_states(), unit_normals())
def test_hydrostatic_flux(w, n):
    w = w.copy()
    w[1:3] = 0
    f = physical_flux(w, n)
    np.testing.assert_allclose(f, [0, w[3] * n[0], w[3] * n[1], 0], atol=1e-15)


@pytest.mark.parametrize("flux", FLUXES)
@given(w=primitive_states(), n=unit_normals())
def test_consistency(flux, w, n):
    np.testing.assert_allclose(flux(w, w, n), physical_flux(w, n), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("flux", FLUXES + [lambda wl, wr, n: physical_flux(wl, n)])
def test_rotational_invariance(flux, rng):
    wl = random_states(rng, (200,))
    wr = random_states(rng, (200,))
    n = np.array([1.0, 0.0])
    for a in rng.uniform(0, 2 * np.pi, 5):
        f = flux(wl, wr, n)
        rn = np.array([np.cos(a), np.sin(a)])
        fr = flux(rotate_state(wl, a), rotate_state(wr, a), rn)
        np.testing.assert_allclose(fr, rotate_state(f, a), atol=1e-12)


def test_ausm_supersonic_upwinds():
    wl = np.array([1.0, 3.0, 0.5, 1 / GAMMA])
    wr = np.array([1.5, 2.5, 0.2, 1.1])
    n = np.array([1.0, 0.0])
    np.testing.assert_allclose(ausm_plus(wl, wr, n), physical_flux(wl, n), rtol=1e-14)
    np.testing.assert_allclose(ausm_plus(wr[None], wl[None], -n)[0], physical_flux(wl, -n),
                               rtol=1e-14)


@given(primitive_states(), unit_normals())
def test_ausm_mirror_states(w, n):
    un = w[1] * n[0] + w[2] * n[1]
    wm = w.copy()
    wm[1:3] = w[1:3] - 2 * un * n
    f = ausm_plus(w, wm, n)
    assert abs(f[0]) <= 1e-12 * (1 + w[0])
    # momentum is purely along n
    t = np.array([-n[1], n[0]])
    assert abs(f[1] * t[0] + f[2] * t[1]) <= 1e-12 * (1 + w[3])
    assert f[3] == pytest.approx(0.0, abs=1e-12 * (1 + w[3]) * (1 + abs(un)))


def test_lax_friedrichs_contact():
    wl = np.array([1.0, 0.5, 0.0, 1.0])
    wr = np.array([2.0, 0.5, 0.0, 1.0])
    n = np.array([1.0, 0.0])
    lam = max(spectral_radius(wl, n), spectral_radius(wr, n))
    f = lax_friedrichs(wl, wr, n)
    assert f[0] == pytest.approx(0.5 * (0.5 + 1.0) - 0.5 * lam * 1.0)


def test_lambda_monotone_in_normal_speed():
    n = np.array([1.0, 0.0])
    speeds = np.linspace(0, 4, 50)
    w = np.stack([np.ones(50), speeds, np.zeros(50), np.ones(50)], axis=-1)
    assert np.all(np.diff(spectral_radius(w, n)) >= 0)


@pytest.mark.parametrize("flux", FLUXES)
def test_conservative_antisymmetry(flux, rng):
    # swapping sides and flipping the normal negates the flux
    wl = random_states(rng, (100,))
    wr = random_states(rng, (100,))
    n = np.array([0.6, 0.8])
    np.testing.assert_allclose(flux(wr, wl, -n), -flux(wl, wr, n), atol=1e-12)


def test_ausm_positive_mass_flux_for_uniform_inflow():
    w = np.array([1.0, 0.2, 0.0, 1.0])
    assert ausm_plus(w, w, [1.0, 0.0])[0] == pytest.approx(0.2)


def test_get_flux():
    assert get_flux("ausm+") is ausm_plus
    with pytest.raises(ValueError):
        get_flux("roe")


def test_jump_uses_conserved_variables():
    wl = np.array([1.0, 0.0, 0.0, 1.0])
    wr = np.array([1.0, 0.0, 0.0, 2.0])
    f = lax_friedrichs(wl, wr, [1.0, 0.0])
    lam = spectral_radius(wr, np.array([1.0, 0.0]))
    dq = prim_to_cons(wr) - prim_to_cons(wl)
    assert f[3] == pytest.approx(-0.5 * lam * dq[3])
