import math

import numpy as np
import pytest

import spinpair

TWO_PI = 2.0 * math.pi


def locked_params(**overrides):
    kwargs = dict(omega1=TWO_PI * 2000.0, omega_d=TWO_PI * 5000.0, tau_c=1e-6, m0=1.0)
    kwargs.update(overrides)
    return spinpair.PhysicalParams(**kwargs)


def test_closed_form_locked_moment():
    assert spinpair.steady_state_mx(locked_params()) == pytest.approx(64.0 / 289.0, rel=1e-14)


def test_projected_coefficients_match_closed_form():
    p = locked_params()
    closed = spinpair.analytic_coefficients9(p)
    projected = spinpair.project_coefficients9(p)
    assert closed.shape == (9, 9)
    scale = np.abs(closed).max()
    assert np.abs(projected - closed).max() <= 1e-12 * scale
    assert spinpair.reduced_coefficients3(p).shape == (3, 3)


def test_integration_locks_near_closed_form():
    p = locked_params()
    traj = spinpair.integrate(p, engine="observable9", t_end=0.02, dt=1e-6)
    assert traj.engine == "observable9"
    assert list(traj.labels) == list(spinpair.observable_labels())
    assert traj.values.shape == (len(traj.times), 9)
    assert traj.times[0] == 0.0
    mx = traj.values[:, traj.column("Mx")]
    target = spinpair.steady_state_mx(p)
    assert mx[-1] == pytest.approx(target, rel=5e-3)
    assert mx[0] == pytest.approx(1.0, abs=1e-12)
    assert spinpair.lock_time(traj) > 0.0


def test_locked_moment_is_even_in_coupling_sign():
    plus = spinpair.integrate(locked_params(), t_end=0.01, dt=1e-6)
    minus = spinpair.integrate(locked_params(omega_d=-TWO_PI * 5000.0), t_end=0.01, dt=1e-6)
    mx = plus.column("Mx")
    assert abs(plus.values[-1, mx] - minus.values[-1, mx]) <= 1e-10


def test_nullspace_agrees_with_closed_form():
    p = locked_params()
    steady = spinpair.steady_state_nullspace(p)
    assert steady.source == "nullspace"
    assert steady.mzy_ss == 0.0
    assert steady.mx_ss == pytest.approx(spinpair.steady_state_mx(p), abs=1e-12)
    assert steady.w_ss / steady.mx_ss == pytest.approx(15.0 / 16.0, rel=1e-12)


def test_coupling_vanishes_at_the_magic_angle():
    magic = math.acos(1.0 / math.sqrt(3.0))
    assert spinpair.omega_d_from_geometry(1.0, 1.0, magic) == pytest.approx(0.0, abs=1e-12)
    assert spinpair.omega_d_from_geometry(1.0, 1.0, 0.0) > 0.0


def test_regime_validation():
    assert spinpair.validate_regime(locked_params()) == []
    warnings = spinpair.validate_regime(locked_params(tau_c=1e-3))
    assert len(warnings) == 2


def test_errors_surface_as_python_exceptions():
    with pytest.raises(spinpair.DegenerateParams):
        spinpair.steady_state_mx(spinpair.PhysicalParams())
    with pytest.raises(spinpair.InvalidM0):
        spinpair.integrate(locked_params(), t_end=1e-4, m0=1.5)
    assert issubclass(spinpair.InvalidM0, spinpair.SimulationError)


def test_sweep_over_drive_strengths():
    rows = spinpair.sweep(
        locked_params(),
        omega1_grid=[TWO_PI * 1000.0, TWO_PI * 2000.0],
        t_end=0.02,
        dt=1e-6,
    )
    assert [row["status"] for row in rows] == ["ok", "ok"]
    assert rows[0]["mx_ss_closed"] < rows[1]["mx_ss_closed"]
    assert rows[0]["lock_time_s"] > rows[1]["lock_time_s"]
    for row in rows:
        assert row["mx_ss_numeric"] == pytest.approx(row["mx_ss_closed"], rel=1e-2)
