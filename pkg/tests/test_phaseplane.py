import math

import numpy as np
import pytest

from frontlab.model import validate_params
from frontlab.phaseplane import (ConnectionClass, DeltaOutOfRange,
                                 ProfileTable, ShootOptions,
                                 backward_orbit_from_p2, flow_sign_across,
                                 launch_state, reconstruct_profile, shoot,
                                 vector_field)

P3312 = validate_params(3, 3, 1, 2)


def test_vector_field_at_equilibria():
    assert vector_field(P3312, 1.0, (0.0, 0.0)) == (0.0, 0.0)
    assert vector_field(P3312, 1.0, (1.0, 0.0)) == (0.0, 0.0)


def test_vector_field_generic_point():
    # X' = Y, Y' = cY - kn X^{n-1} Y - X^p + X^q
    fx, fy = vector_field(P3312, 2.0, (0.5, 0.25))
    assert fx == 0.25
    assert fy == pytest.approx(2.0 * 0.25 - 6.0 * 0.25 * 0.25
                               - 0.125 + 0.5)


def test_launch_delta_range():
    with pytest.raises(DeltaOutOfRange):
        launch_state(P3312, 1.0, 0.0)
    with pytest.raises(DeltaOutOfRange):
        launch_state(P3312, 1.0, 1e-2)


def test_launch_saddle_slope_q1():
    d = 1e-6
    x, y = launch_state(P3312, 1.5, d)
    lam1 = 0.5 * (1.5 + math.sqrt(1.5 ** 2 + 4.0))
    assert x == d
    assert y / d == pytest.approx(lam1)


def test_launch_degenerate_positive_c():
    p = validate_params(3, 5, 3, 2)
    d = 1e-6
    _, y = launch_state(p, 2.0, d)
    assert y == pytest.approx(2.0 * d)


def test_launch_c_zero_resonant_slope():
    # n = (q+1)/2 at c = 0: Y ~ v1 X^n with
    # v1 = (sqrt(k^2 n^2 + 4n) - kn)/(2n)
    p = validate_params(2, 4, 3, 1.5)
    d = 1e-4
    _, y = launch_state(p, 0.0, d)
    v1 = (math.sqrt(1.5 ** 2 * 4.0 + 8.0) - 3.0) / 4.0
    assert y / d ** 2 == pytest.approx(v1, rel=1e-12)


def test_launch_c_zero_generic_branch():
    # n > (q+1)/2 at c = 0: Y ~ sqrt(2/(q+1)) X^{(q+1)/2}
    p = validate_params(3, 5, 3, 2)
    d = 1e-4
    _, y = launch_state(p, 0.0, d)
    assert y == pytest.approx(math.sqrt(0.5) * d ** 2, rel=1e-12)


def test_shoot_below_critical_is_leading():
    traj = shoot(P3312, 1.0)
    assert traj.connection is ConnectionClass.DIRECT_LEADING
    assert traj.Y.min() >= 0.0
    assert traj.X.max() <= 1.0 + 1e-8


def test_shoot_at_critical_is_nonleading():
    traj = shoot(P3312, 1.5)
    assert traj.connection is ConnectionClass.DIRECT_CRITICAL
    # arrival tangent to e_-: slope near lambda_- = -4
    assert traj.approach_slope == pytest.approx(-4.0, abs=5e-3)


def test_shoot_above_critical_overshoots():
    traj = shoot(P3312, 3.0)
    assert traj.connection is ConnectionClass.OVERSHOOT
    assert traj.x0_crossing > 1.0


def test_classification_monotone_in_c():
    # direct below the critical velocity, overshoot above, one changeover
    flags = [shoot(P3312, c).connection is ConnectionClass.OVERSHOOT
             for c in (-1.0, 0.5, 1.2, 1.8, 2.5, 4.0)]
    assert flags == sorted(flags)
    assert flags[0] is False and flags[-1] is True


def test_trajectory_csv_roundtrip(tmp_path):
    traj = shoot(P3312, 1.0)
    path = tmp_path / "traj.csv"
    traj.to_csv(path)
    data = np.genfromtxt(path, delimiter=",", names=True)
    assert np.allclose(data["X"], traj.X)
    assert np.allclose(data["Y"], traj.Y)


def test_profile_reconstruction_matches_closed_form():
    # k=2, n=p=3, q=1 at c = (k^2-1)/k: f = (1 + C e^{-k(n-1)xi})^{-1/(n-1)}
    traj = shoot(P3312, 1.5)
    prof = reconstruct_profile(traj, P3312, 1.5)
    # anchored at the half level
    assert float(np.interp(0.0, prof.xi, prof.f)) == pytest.approx(
        0.5, abs=1e-9)
    C = 0.5 ** -2 - 1.0   # fixes f(0) = 1/2 for rate k(n-1), power 1/2
    exact = (1.0 + C * np.exp(-4.0 * prof.xi)) ** -0.5
    assert np.abs(prof.f - exact).max() < 1e-6
    assert np.all(np.diff(prof.f) >= 0.0)


def test_profile_second_order_residual():
    # f'' - c f' + kn f^{n-1} f' + f^p - f^q = 0 on the uniform table
    c = 1.5
    prof = reconstruct_profile(shoot(P3312, c), P3312, c)
    f = prof.f
    h = prof.xi[1] - prof.xi[0]
    # fourth-order stencils keep the truncation error below the table's
    # own accuracy
    d1 = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    d2 = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3]
          - f[:-4]) / (12 * h ** 2)
    fm = f[2:-2]
    res = d2 - c * d1 + 6.0 * fm ** 2 * d1 + fm ** 3 - fm
    # the table is accurate to ~1e-9 pointwise; the second difference
    # amplifies that noise by 1/h^2, which bounds what is checkable here
    assert np.abs(res).max() < 2e-4


def test_profile_table_extends_constantly():
    t = ProfileTable(np.array([0.0, 1.0]), np.array([0.2, 0.8]), 1.0)
    assert t(-5.0) == 0.2 and t(5.0) == 0.8
    assert t(0.5) == pytest.approx(0.5)


def test_flow_sign_zero_on_true_orbit():
    # BASIC: Y = X - X^n is an exact orbit at c = 0 for n=p=3, q=1, k=1
    p = validate_params(3, 3, 1, 1)
    for x in (0.2, 0.5, 0.8):
        g = x - x ** 3
        dg = 1.0 - 3.0 * x ** 2
        assert flow_sign_across(p, 0.0, g, dg, x) == pytest.approx(
            0.0, abs=1e-14)


def test_flow_sign_detects_side():
    # push the same curve up/down: the crossing direction flips
    p = validate_params(3, 3, 1, 1)
    x = 0.5
    dg = 1.0 - 3.0 * x ** 2
    g = x - x ** 3
    up = flow_sign_across(p, 0.0, g + 0.05, dg, x)
    down = flow_sign_across(p, 0.0, g - 0.05, dg, x)
    assert up * down < 0.0


def test_backward_orbit_spans_zero_to_one():
    xi, X, Y = backward_orbit_from_p2(P3312, 1.0)
    assert X[0] < 1e-6 and X[-1] > 1.0 - 1e-6
    assert np.all(np.diff(xi) > 0)
    assert Y[len(Y) // 2] > 0.0


def test_small_delta_retry_consistency():
    a = shoot(P3312, 1.0, ShootOptions(delta=1e-6))
    b = shoot(P3312, 1.0, ShootOptions(delta=1e-7))
    assert a.connection is b.connection
