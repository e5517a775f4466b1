import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tcfv.errors import ConfigurationError, ContractError
from tcfv.gasdyn import ShockSpec, shock_field
from tcfv.mesh import build_ramp_mesh, build_uniform_mesh
from tcfv.metrics import (METRICS_COLUMNS, ProfileSample, error_norms, extract_profile,
                          extract_row, field_error_norms, monotonicity_mu, order_of_accuracy,
                          shock_windows, total_variation, write_history_csv, write_rows_csv)


def profile_from(err, shock_x=None):
    n = len(err)
    x = np.arange(n) + 0.5
    num = np.ones(n)
    return ProfileSample(x, num, num + np.asarray(err), x - 0.5, x + 0.5)


def test_error_norm_examples():
    assert error_norms([0, 0, 0]) == (0.0, 0.0)
    l2, linf = error_norms([3, 4])
    assert l2 == pytest.approx(np.sqrt(12.5)) and linf == 4.0
    with pytest.raises(ContractError):
        error_norms([])


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_l2_never_exceeds_linf(e):
    l2, linf = error_norms(e)
    assert l2 <= linf * (1 + 1e-12) + 1e-300


def test_total_variation_examples():
    assert total_variation([2.0] * 5) == 0.0
    assert total_variation([0, 1, 0]) == 2.0
    assert total_variation([0, 0.5, 1]) == 1.0


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=20),
       st.lists(st.floats(-10, 10), min_size=1, max_size=20))
def test_tv_concatenation_identity(a, b):
    joined = total_variation(a + b)
    assert joined == pytest.approx(total_variation(a) + total_variation(b) + abs(a[-1] - b[0]),
                                   abs=1e-9)


@given(st.lists(st.floats(0, 1), min_size=20, max_size=20),
       st.lists(st.floats(0, 1), min_size=20, max_size=20), st.booleans())
def test_mu_zero_for_monotone_from_zero(pre, post, negative):
    """Errors that grow monotonically away from zero at the outer window edges."""
    sign = -1.0 if negative else 1.0
    up = sign * np.concatenate(([0.0], np.sort(pre)[1:]))   # 0 far upstream, largest at shock
    down = sign * np.concatenate((np.sort(post)[::-1][:-1], [0.0]))
    err = np.concatenate((np.zeros(3), up, [7.0], down, np.zeros(3)))
    rep = monotonicity_mu(profile_from(err), shock_x=23.5)
    assert rep.pre.mu == 0.0 and rep.post.mu == 0.0 and rep.mu == 0.0


def test_oscillation_gives_positive_mu():
    err = np.zeros(45)
    err[18:22] = [0.1, -0.2, 0.3, -0.1]
    rep = monotonicity_mu(profile_from(err), shock_x=22.5)
    assert rep.pre.mu == pytest.approx(total_variation(err[2:22]) - 0.3)
    assert rep.post.mu == 0.0
    assert rep.mu == pytest.approx(rep.tv - rep.linf)
    assert rep.tv == pytest.approx(rep.pre.tv + rep.post.tv)


def test_windows_exclude_crossing_column():
    p = profile_from(np.zeros(50))
    pre, post = shock_windows(p, shock_x=25.3)
    assert 25 not in pre and 25 not in post
    assert list(pre) == list(range(5, 25)) and list(post) == list(range(26, 46))
    # shock on a face: nothing to drop
    pre, post = shock_windows(p, shock_x=25.0)
    assert pre[-1] == 24 and post[0] == 25


def test_windows_upstream_high_and_split():
    p = profile_from(np.zeros(50))
    pre, post = shock_windows(p, shock_x=25.3, upstream="high")
    # ordered along the flow, which now runs toward -x
    assert pre[0] == 45 and pre[-1] == 26 and post[0] == 24
    pre, post = shock_windows(p, split=30)
    assert list(pre) == list(range(10, 30)) and list(post) == list(range(30, 50))


def test_windows_need_cells():
    with pytest.raises(ContractError, match="available: 10 below"):
        shock_windows(profile_from(np.zeros(40)), shock_x=10.5)
    with pytest.raises(ConfigurationError):
        shock_windows(profile_from(np.zeros(50)), shock_x=25.5, upstream="left")


def test_negative_mu_is_reported(caplog):
    err = np.zeros(50)
    err[5:25] = 0.5  # constant offset: TV 0, Linf 0.5
    with caplog.at_level(logging.WARNING, logger="tcfv.metrics"):
        rep = monotonicity_mu(profile_from(err), shock_x=25.0)
    assert rep.pre.mu == pytest.approx(-0.5)
    assert "negative mu_pre" in caplog.text


def test_extract_profile_medium_grid():
    mesh = build_uniform_mesh((0, 1), (0, 1), 200, 200)
    spec = ShockSpec.through((0.5, 0.5), 3.0, 30.0, 60.0, ((0, 1), (0, 1)))
    w = shock_field(spec, mesh)
    p = extract_profile(w, mesh, 0.5, w)
    assert len(p) == 200
    np.testing.assert_allclose(p.x, mesh.centers[:, 100, 0])
    assert mesh.centers[0, 100, 1] == pytest.approx(0.5025)
    jump = np.flatnonzero(np.diff(p.rho_exact))
    assert list(jump) == [99]
    with pytest.raises(ConfigurationError):
        extract_profile(w, mesh, 1.2, w)


def test_extract_row_on_ramp():
    mesh = build_ramp_mesh(30, 12.77, 20, 20, 10)
    w = np.ones(mesh.shape + (4,))
    p = extract_row(w, mesh, 5, w)
    assert len(p) == 40
    with pytest.raises(ConfigurationError):
        extract_row(w, mesh, 10, w)


def test_profile_requires_increasing_x():
    with pytest.raises(ContractError):
        ProfileSample(np.array([0.0, 0.0]), np.ones(2), np.ones(2), np.zeros(2), np.ones(2))


def test_order_of_accuracy():
    assert order_of_accuracy(8, 1, 2, 1) == pytest.approx(3.0)
    assert order_of_accuracy(2.42e-2, 3.20e-3, 2, 1) == pytest.approx(2.92, abs=0.005)
    assert order_of_accuracy(1, 8, 1, 2) == pytest.approx(order_of_accuracy(8, 1, 2, 1))
    with pytest.raises(ContractError):
        order_of_accuracy(0, 1, 2, 1)
    with pytest.raises(ContractError):
        order_of_accuracy(1, 2, 1, 1)


def test_field_error_norms():
    w = np.ones((3, 3, 4))
    ex = w.copy()
    ex[1, 1, 0] = 1.3
    l2, linf = field_error_norms(w, ex)
    assert linf == pytest.approx(0.3) and l2 == pytest.approx(0.1)


def test_csv_writers(tmp_path):
    write_history_csv(tmp_path / "h.csv", [1.0, 0.5])
    assert (tmp_path / "h.csv").read_text().splitlines() == ["iter,RN", "1,1.0", "2,0.5"]
    write_rows_csv(tmp_path / "m.csv", METRICS_COLUMNS,
                   [{"case": "aligned-oblique", "config": "33", "mu_overall": 1e-3,
                     "converged": True, "iters": 12}])
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines[0] == "case,config,L2,Linf,TV,mu_pre,mu_post,mu_overall,converged,iters"
    assert lines[1] == "aligned-oblique,33,,,,,,0.001,true,12"
    profile_from([0.0, 1.0]).to_csv(tmp_path / "p.csv")
    assert (tmp_path / "p.csv").read_text().splitlines()[0] == "x,rho_num,rho_exact"
