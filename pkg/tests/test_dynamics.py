import math

import numpy as np
import pytest

from se23control.dynamics import (
    ControlInput,
    Environment,
    HelixReference,
    HoverReference,
    feasibility_residual,
    flow_constant,
    mixed_invariant_rhs,
    reference,
    step,
)
from se23control.se23_group import C_MATRIX, GroupElement, compose, exp_se23, wedge
from se23control.so3_core import exp_so3, hat

from conftest import random_xi


@pytest.fixture
def env():
    return Environment(g=np.array([0.0, 0.0, -9.81]), e_T=np.array([0.0, 0.0, 1.0]))


def dense_rhs(X, u, env):
    M = wedge(np.concatenate([np.zeros(3), env.g, np.zeros(3)]))
    N = wedge(np.concatenate([np.zeros(3), u.T * env.e_T, u.omega]))
    Xm = X.as_matrix()
    return (M - C_MATRIX) @ Xm + Xm @ (N + C_MATRIX)


def test_environment_validation():
    with pytest.raises(ValueError, match="unit"):
        Environment(g=np.zeros(3), e_T=np.array([0.0, 0.0, 1.001]))


def test_control_input_validation():
    with pytest.raises(ValueError, match="thrust"):
        ControlInput(-1.0, np.zeros(3))


def test_rhs_hover_equilibrium(env):
    u = ControlInput(9.81, np.zeros(3))
    M = mixed_invariant_rhs(GroupElement.identity(), u, env)
    np.testing.assert_allclose(M, np.zeros((5, 5)), atol=1e-12)


def test_rhs_free_fall(env):
    u = ControlInput(0.0, np.zeros(3))
    X = GroupElement(np.eye(3), np.array([1.0, 0, 0]), np.zeros(3))
    M = mixed_invariant_rhs(X, u, env)
    np.testing.assert_array_equal(M[0:3, 3], env.g)  # vdot = g
    np.testing.assert_array_equal(M[0:3, 4], X.v)  # pdot = v


def test_rhs_matches_dense(env, rng):
    for _ in range(50):
        X = exp_se23(random_xi(rng))
        u = ControlInput(rng.uniform(0, 20), rng.normal(size=3))
        np.testing.assert_allclose(mixed_invariant_rhs(X, u, env), dense_rhs(X, u, env), atol=1e-13)
        assert np.array_equal(mixed_invariant_rhs(X, u, env)[3:5, :], np.zeros((2, 5)))


def test_step_hover_exact(env):
    u = ControlInput(9.81, np.zeros(3))
    X = GroupElement.identity()
    for _ in range(100):
        X = step(X, u, env, 1e-3)
    np.testing.assert_allclose(X.as_matrix(), np.eye(5), atol=1e-12)


def test_step_pure_rotation(env):
    omega = np.array([0.4, -0.3, 0.5])
    env0 = Environment(g=np.zeros(3), e_T=env.e_T)
    u = ControlInput(0.0, omega)
    X = GroupElement.identity()
    h = 1e-3
    for _ in range(1000):
        X = step(X, u, env0, h)
    np.testing.assert_allclose(X.R, exp_so3(omega), atol=1e-9)


def test_step_constant_input_is_exact_flow(env, rng):
    X0 = exp_se23(random_xi(rng))
    u = ControlInput(11.0, rng.normal(size=3))
    X1 = step(X0, u, env, 0.37)
    X2 = flow_constant(X0, u, env, 0.37)
    np.testing.assert_array_equal(X1.as_matrix(), X2.as_matrix())


def test_step_rejects_bad_h(env):
    with pytest.raises(ValueError):
        step(GroupElement.identity(), ControlInput(9.81, np.zeros(3)), env, 0.0)


def test_step_order_sweep(env, rng):
    """Halving h reduces the global error by >= 15x (4th order)."""

    def u_fn(t):
        return ControlInput(9.81 + 3 * math.sin(2 * t), np.array([0.6 * math.cos(3 * t), -0.4, 0.5 * math.sin(t)]))

    X0 = exp_se23(random_xi(rng, r_max=0.5, t_max=1.0))

    def integrate(n):
        h = 1.0 / n
        X = X0
        for k in range(n):
            X = step(X, u_fn, env, h, t=k * h)
        return X.as_matrix()

    ref = integrate(8192)
    errs = [np.abs(integrate(n) - ref).max() for n in (64, 128, 256)]
    assert errs[0] / errs[1] >= 15.0
    assert errs[1] / errs[2] >= 15.0


def test_group_preservation_long_run(env, rng):
    """After 1e5 steps the rotation stays orthonormal within 1e-7."""
    X = exp_se23(random_xi(rng, r_max=1.0))
    u = ControlInput(11.0, np.array([0.3, -0.2, 0.5]))
    for _ in range(100000):
        X = step(X, u, env, 1e-3)
    assert np.abs(X.R.T @ X.R - np.eye(3)).max() < 1e-7


def test_left_invariance_rotation_translation_subgroup(rng):
    """With gravity off, left translation by (R_G, 0, p_G) commutes with the flow."""
    env0 = Environment(g=np.zeros(3), e_T=np.array([0.0, 0.0, 1.0]))
    u = ControlInput(7.0, np.array([0.2, 0.4, -0.3]))
    X0 = exp_se23(random_xi(rng, r_max=1.0))
    G = GroupElement(exp_so3(rng.normal(size=3)), np.zeros(3), rng.normal(size=3))

    h, n = 1e-3, 500
    Xa = compose(G, X0)
    Xb = X0
    for k in range(n):
        Xa = step(Xa, u, env0, h)
        Xb = step(Xb, u, env0, h)
    np.testing.assert_allclose(Xa.as_matrix(), compose(G, Xb).as_matrix(), atol=1e-11)


def test_hover_reference(env):
    traj = HoverReference(env, position=(1.0, 2.0, 3.0))
    s = reference(5.0, traj)
    assert s.T_bar == pytest.approx(9.81)
    np.testing.assert_array_equal(s.omega_bar, np.zeros(3))
    np.testing.assert_array_equal(s.Xbar.p, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(s.Xbar.R @ (s.T_bar * env.e_T), -env.g, atol=1e-12)


def test_hover_reference_tilted_axis():
    env = Environment(g=np.array([0.0, 0.0, -9.81]), e_T=np.array([0.0, 1.0, 0.0]))
    s = HoverReference(env).sample(0.0)
    np.testing.assert_allclose(s.Xbar.R @ (s.T_bar * env.e_T), [0, 0, 9.81], atol=1e-12)


def test_circle_reference_feasible(env):
    traj = HelixReference(env, radius=2.0, period=8.0)
    for t in (0.0, 0.7, 2.3, 5.1):
        assert feasibility_residual(traj, env, t) < 1e-8


def test_helix_reference_feasible(env):
    traj = HelixReference(env, radius=1.5, period=6.0, climb_rate=0.4)
    for t in (0.0, 1.1, 3.9):
        assert feasibility_residual(traj, env, t) < 1e-8
    s0, s1 = traj.sample(0.0), traj.sample(2.5)
    assert s1.Xbar.p[2] - s0.Xbar.p[2] == pytest.approx(0.4 * 2.5)


def test_circle_reference_constant_body_rates(env):
    traj = HelixReference(env, radius=2.0, period=8.0)
    s0, s1 = traj.sample(0.0), traj.sample(3.3)
    assert s0.T_bar == s1.T_bar
    np.testing.assert_array_equal(s0.omega_bar, s1.omega_bar)


def test_circle_reference_rejects_vanishing_thrust():
    env_tiny = Environment(g=np.array([0.0, 0.0, -1e-12]), e_T=np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError, match="infeasible"):
        HelixReference(env_tiny, radius=1e-9, period=1e3)


def test_circle_reference_rejects_bad_geometry(env):
    with pytest.raises(ValueError, match="radius"):
        HelixReference(env, radius=-1.0, period=8.0)
    with pytest.raises(ValueError, match="period"):
        HelixReference(env, radius=1.0, period=0.0)
    env_side = Environment(g=np.array([0.0, 0.0, -9.81]), e_T=np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError, match="e_T"):
        HelixReference(env_side, radius=1.0, period=8.0)


def test_hover_requires_gravity():
    env0 = Environment(g=np.zeros(3), e_T=np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError, match="gravity"):
        HoverReference(env0)
