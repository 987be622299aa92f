import numpy as np
import pytest

from se23control.controller import Gains
from se23control.stability import (
    envelope_check,
    error_system_matrix,
    gain_condition_check,
    integrate_error_system,
    lyapunov_value,
    skew_quadratic_identity_test,
)
from se23control.so3_core import exp_so3


def test_gain_condition_example_holds():
    rep = gain_condition_check(Gains.from_scalars(1.0, 1.0, 60.0), 9.81)
    assert rep.condition_holds
    assert rep.B_norm == pytest.approx(9.81)
    assert rep.margin == pytest.approx(60.0 - 9.81**2 / 2.0)  # 11.88...
    assert rep.alpha == pytest.approx(0.5)


def test_gain_condition_example_fails():
    rep = gain_condition_check(Gains.from_scalars(1.0, 1.0, 40.0), 9.81)
    assert not rep.condition_holds
    assert rep.margin == pytest.approx(40.0 - 48.11805, abs=1e-4)
    assert rep.alpha < 0


def test_gain_condition_free_fall_reference():
    rep = gain_condition_check(Gains.from_scalars(1.0, 1.0, 0.1), 0.0)
    assert rep.condition_holds  # B = 0: kappa_r > 0 suffices
    assert rep.margin == pytest.approx(0.1)


def test_gain_condition_rejects_negative_thrust():
    with pytest.raises(ValueError):
        gain_condition_check(Gains.from_scalars(1, 1, 1), -1.0)


def test_alpha_monotone_in_gains(rng):
    base = gain_condition_check(Gains.from_scalars(1.0, 1.0, 60.0), 9.81).alpha
    for _ in range(20):
        kp = 1.0 + rng.uniform(0, 5)
        kv = 1.0 + rng.uniform(0, 5)
        kr = 60.0 + rng.uniform(0, 50)
        rep = gain_condition_check(Gains.from_scalars(kp, kv, kr), 9.81)
        assert rep.alpha >= base - 1e-12


def test_lyapunov_value():
    assert lyapunov_value(np.zeros(3), np.zeros(3), np.zeros(3)) == 0.0
    assert lyapunov_value([1, 0, 0], np.zeros(3), np.zeros(3)) == 0.5


def test_lyapunov_rotation_invariance(rng):
    R = exp_so3(rng.normal(size=3))
    a, b, c = rng.normal(size=3), rng.normal(size=3), rng.normal(size=3)
    assert lyapunov_value(R @ a, R @ b, R @ c) == pytest.approx(lyapunov_value(a, b, c))


def test_skew_quadratic_identity(rng):
    for _ in range(3):
        assert skew_quadratic_identity_test(rng.normal(size=3), rng.normal(size=3)) < 1e-14


def test_envelope_zero_start():
    t = np.linspace(0, 1, 11)
    res = envelope_check(t, np.zeros(11), alpha=0.5)
    assert res.passed and res.applicable


def test_envelope_synthetic_pass_and_fail():
    t = np.linspace(0, 5, 501)
    V = 2.0 * np.exp(-1.2 * t)
    res = envelope_check(t, V, alpha=0.5, tol=0.05)
    assert res.passed
    assert res.fitted_exponent == pytest.approx(-1.2, abs=1e-6)
    res = envelope_check(t, 2.0 * np.exp(-0.8 * t), alpha=0.5, tol=0.05)
    assert not res.passed


def test_envelope_not_applicable_for_bad_alpha():
    t = np.linspace(0, 1, 11)
    res = envelope_check(t, np.exp(-t), alpha=-0.3)
    assert not res.applicable


def test_linear_error_system_envelope():
    gains = Gains.from_scalars(1.0, 1.0, 60.0)
    z0 = np.zeros(9)
    z0[0] = 1.0
    t, V = integrate_error_system(gains, 9.81, [0.0, 0.0, 1.0], np.zeros(3), z0, 10.0, 1e-3)
    rep = gain_condition_check(gains, 9.81)
    res = envelope_check(t, V, rep.alpha, tol=1e-3)
    assert res.passed


def test_linear_error_system_rotating_frame(rng):
    """Skew terms along e_T leave V untouched; a general omega_bar still
    cannot break the envelope (the bound argument only uses norms)."""
    gains = Gains.from_scalars(1.0, 1.0, 60.0)
    z0 = rng.normal(size=9) * 0.5
    e_T = np.array([0.0, 0.0, 1.0])
    t, V = integrate_error_system(gains, 9.81, e_T, 2.0 * e_T, z0, 6.0, 1e-3)
    t0, V0 = integrate_error_system(gains, 9.81, e_T, np.zeros(3), z0, 6.0, 1e-3)
    np.testing.assert_allclose(V, V0, rtol=1e-9)

    rep = gain_condition_check(gains, 9.81)
    z0 = np.zeros(9)
    z0[0] = 1.0
    t, V = integrate_error_system(gains, 9.81, e_T, rng.normal(size=3), z0, 6.0, 1e-3)
    assert envelope_check(t, V, rep.alpha, tol=1e-3).passed


def test_vdot_bounded_by_envelope_rate_along_linear_run():
    """V-dot <= -2 alpha V sampled by centered differences."""
    gains = Gains.from_scalars(1.0, 1.0, 60.0)
    z0 = np.zeros(9)
    z0[0] = 1.0
    t, V = integrate_error_system(gains, 9.81, [0.0, 0.0, 1.0], np.zeros(3), z0, 8.0, 1e-3)
    rep = gain_condition_check(gains, 9.81)
    vdot = (V[2:] - V[:-2]) / (2e-3)
    assert np.all(vdot <= -2.0 * rep.alpha * V[1:-1] + 1e-9)


def test_error_system_matrix_spectrum():
    gains = Gains.from_scalars(1.0, 1.0, 60.0)
    A = error_system_matrix(gains, 9.81, [0.0, 0.0, 1.0], np.zeros(3))
    eigs = np.linalg.eigvals(A)
    assert eigs.real.max() < 0
