"""Mixed-invariant rigid-body model and Lie-group integration.

Model: Xdot = (M - C) X + X (N + C) with M = [0, g, 0]^wedge (inertial
gravity), N = [0, T e_T, omega]^wedge (body thrust and angular velocity), and
C the constant normalizer matrix. Expanded: pdot = v, vdot = g + R T e_T,
Rdot = R hat(omega).

step() splits the flow into the exact nilpotent left factor exp(h(M - C)) and
a Magnus-4 step on the right-invariant factor Zdot = Z (N(t) + C). For
piecewise-constant inputs the commutator terms vanish and the step is the
exact flow; for time-varying input callables it is 4th order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .se23_group import C_MATRIX, GroupElement, wedge
from .so3_core import exp_so3, hat, jl_so3, q_l

T_MIN = 1e-6


@dataclass(frozen=True)
class ControlInput:
    """Specific thrust T (m/s^2, >= 0) and body angular velocity omega (rad/s)."""

    T: float
    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float).reshape(3)
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise ValueError(f"thrust must be finite and nonnegative, got {self.T}")
        if not np.isfinite(omega).all():
            raise ValueError("omega must be finite")
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "omega", omega)


@dataclass(frozen=True)
class Environment:
    """Inertial gravity vector and unit body thrust axis."""

    g: np.ndarray
    e_T: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float).reshape(3)
        e_T = np.asarray(self.e_T, dtype=float).reshape(3)
        if not np.isfinite(g).all():
            raise ValueError("gravity must be finite")
        if abs(np.linalg.norm(e_T) - 1.0) > 1e-9:
            raise ValueError(f"e_T must be unit within 1e-9, |e_T| = {np.linalg.norm(e_T)!r}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "e_T", e_T)


@dataclass(frozen=True)
class ReferenceSample:
    """Reference state and inputs at one instant, plus gravity feed-through."""

    Xbar: GroupElement
    T_bar: float
    omega_bar: np.ndarray
    g_tilde: np.ndarray = field(default_factory=lambda: np.zeros(3))


def mixed_invariant_rhs(X: GroupElement, u: ControlInput, env: Environment) -> np.ndarray:
    """5x5 tangent Xdot at X; equals (M - C) X + X (N + C) componentwise."""
    M = np.zeros((5, 5))
    M[0:3, 0:3] = X.R @ hat(u.omega)
    M[0:3, 3] = env.g + X.R @ (u.T * env.e_T)
    M[0:3, 4] = X.v
    return M


def _left_factor(h: float, g: np.ndarray) -> np.ndarray:
    # exp(h (M - C)); (M - C) is nilpotent of index 3.
    E = np.eye(5)
    E[0:3, 3] = h * g
    E[0:3, 4] = -0.5 * h * h * g
    E[3, 4] = -h
    return E


def _exp_extended(w: np.ndarray, a: np.ndarray, b: np.ndarray, s: float) -> np.ndarray:
    # exp of [[hat(w), a, b], [0, 0, s], [0, 0, 0]]:
    # [[exp(w), J_l(w) a, J_l(w) b + s Q_l(w) a], [0, 1, s], [0, 0, 1]]
    J = jl_so3(w)
    E = np.eye(5)
    E[0:3, 0:3] = exp_so3(w)
    E[0:3, 3] = J @ a
    E[0:3, 4] = J @ b + s * (q_l(w) @ a)
    E[3, 4] = s
    return E


_GAUSS_OFFSET = math.sqrt(3.0) / 6.0

InputLike = Union[ControlInput, Callable[[float], ControlInput]]


def step(
    X: GroupElement, u: InputLike, env: Environment, h: float, t: float = 0.0
) -> GroupElement:
    """Advance the state by one step of size h starting at time t.

    u may be a ControlInput (held constant over the step; the step is then the
    exact flow) or a callable t -> ControlInput (Magnus-4, local error O(h^5)).
    """
    if h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    if callable(u):
        u1 = u(t + (0.5 - _GAUSS_OFFSET) * h)
        u2 = u(t + (0.5 + _GAUSS_OFFSET) * h)
        A1 = wedge(np.concatenate([np.zeros(3), u1.T * env.e_T, u1.omega])) + C_MATRIX
        A2 = wedge(np.concatenate([np.zeros(3), u2.T * env.e_T, u2.omega])) + C_MATRIX
        Theta = 0.5 * h * (A1 + A2) + (math.sqrt(3.0) / 12.0) * h * h * (A1 @ A2 - A2 @ A1)
        w = np.array([Theta[2, 1], Theta[0, 2], Theta[1, 0]])
        right = _exp_extended(w, Theta[0:3, 3], Theta[0:3, 4], Theta[3, 4])
    else:
        right = _exp_extended(h * u.omega, h * u.T * env.e_T, np.zeros(3), h)
    M = _left_factor(h, env.g) @ X.as_matrix() @ right
    return GroupElement.from_matrix(M)


def flow_constant(
    X0: GroupElement, u: ControlInput, env: Environment, t: float
) -> GroupElement:
    """Exact flow under constant input: exp(t(M-C)) X0 exp(t(N+C))."""
    right = _exp_extended(t * u.omega, t * u.T * env.e_T, np.zeros(3), t)
    return GroupElement.from_matrix(_left_factor(t, env.g) @ X0.as_matrix() @ right)


class HoverReference:
    """Constant hover: thrust cancels gravity, zero angular velocity."""

    def __init__(self, env: Environment, position=(0.0, 0.0, 0.0)):
        g_norm = float(np.linalg.norm(env.g))
        if g_norm < T_MIN:
            raise ValueError("hover requires nonzero gravity")
        self.env = env
        self.T_bar = g_norm
        self.omega_bar = np.zeros(3)
        up = -env.g / g_norm
        axis = np.cross(env.e_T, up)
        angle = math.atan2(float(np.linalg.norm(axis)), float(env.e_T @ up))
        if np.linalg.norm(axis) < 1e-12:
            if angle > 1.0:  # thrust axis anti-parallel to up: flip about any normal
                perp = np.array([1.0, 0.0, 0.0])
                if abs(env.e_T[0]) > 0.9:
                    perp = np.array([0.0, 1.0, 0.0])
                axis_unit = np.cross(env.e_T, perp)
                axis_unit /= np.linalg.norm(axis_unit)
                R0 = exp_so3(axis_unit * math.pi)
            else:
                R0 = np.eye(3)
        else:
            R0 = exp_so3(axis / np.linalg.norm(axis) * angle)
        self._X = GroupElement(R0, np.zeros(3), np.asarray(position, dtype=float))

    def sample(self, t: float) -> ReferenceSample:
        return ReferenceSample(self._X, self.T_bar, self.omega_bar)


def _rot_z(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_y(a: float) -> np.ndarray:
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


class HelixReference:
    """Planar circle (climb_rate = 0) or helix with constant body rates.

    Requires the upright configuration e_T = (0,0,1), g = (0,0,-|g|): the
    tilt toward the circle center is then constant in the body frame, so
    T_bar and omega_bar are constants and feasibility is exact.
    """

    def __init__(
        self,
        env: Environment,
        radius: float,
        period: float,
        climb_rate: float = 0.0,
        center=(0.0, 0.0, 0.0),
    ):
        if radius <= 0.0:
            raise ValueError(f"radius must be positive, got {radius}")
        if period <= 0.0:
            raise ValueError(f"period must be positive, got {period}")
        if np.linalg.norm(env.e_T - np.array([0.0, 0.0, 1.0])) > 1e-9:
            raise ValueError("circle/helix references require e_T = (0, 0, 1)")
        if abs(env.g[0]) > 1e-12 or abs(env.g[1]) > 1e-12 or env.g[2] >= 0.0:
            raise ValueError("circle/helix references require g = (0, 0, -|g|)")
        self.env = env
        self.radius = radius
        self.omega_orbit = 2.0 * math.pi / period
        self.climb_rate = float(climb_rate)
        self.center = np.asarray(center, dtype=float)
        a_c = radius * self.omega_orbit**2
        g_norm = -float(env.g[2])
        self.T_bar = math.hypot(a_c, g_norm)
        if self.T_bar < T_MIN:
            raise ValueError("infeasible circle: required thrust is zero")
        self.tilt = math.atan2(a_c, g_norm)
        self.omega_bar = self.omega_orbit * np.array([math.sin(self.tilt), 0.0, math.cos(self.tilt)])
        self._R_tilt = _rot_y(-self.tilt)

    def sample(self, t: float) -> ReferenceSample:
        a = self.omega_orbit * t
        c, s = math.cos(a), math.sin(a)
        rho, w = self.radius, self.climb_rate
        p = self.center + np.array([rho * c, rho * s, w * t])
        v = np.array([-rho * self.omega_orbit * s, rho * self.omega_orbit * c, w])
        R = _rot_z(a) @ self._R_tilt
        return ReferenceSample(GroupElement(R, v, p), self.T_bar, self.omega_bar)


def reference(t: float, traj) -> ReferenceSample:
    """Sample a reference trajectory generator at time t."""
    return traj.sample(t)


def feasibility_residual(traj, env: Environment, t: float, h: float = 1e-5) -> float:
    """Max finite-difference residual of the reference against the model."""
    sm, s0, sp = traj.sample(t - h), traj.sample(t), traj.sample(t + h)
    u = ControlInput(s0.T_bar, s0.omega_bar)
    rhs = mixed_invariant_rhs(s0.Xbar, u, env)
    dp = (sp.Xbar.p - sm.Xbar.p) / (2.0 * h)
    dv = (sp.Xbar.v - sm.Xbar.v) / (2.0 * h)
    dR = (sp.Xbar.R - sm.Xbar.R) / (2.0 * h)
    return float(
        max(
            np.abs(dp - rhs[0:3, 4]).max(),
            np.abs(dv - rhs[0:3, 3]).max(),
            np.abs(dR - rhs[0:3, 0:3]).max(),
        )
    )
