"""Gain-condition check, Lyapunov machinery, and envelope verification.

The cascaded error system

    e_p-dot = -[omega_bar]x e_p - K_p e_p + e_v
    e_v-dot = -[omega_bar]x e_v - K_v e_v + B e_r
    e_r-dot = -[omega_bar]x e_r - K_r e_r,      B = -T_bar [e_T]x

is exponentially stable when lambda_min(K_r) > ||B||^2 / (2 lambda_min(K_v));
the quadratic V = (|e_p|^2 + |e_v|^2 + |e_r|^2)/2 then satisfies
V(t) <= V(0) exp(-2 alpha t) with
alpha = min(k_p/2, k_v/2, k_r - ||B||^2/(2 k_v)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controller import Gains
from .so3_core import hat


@dataclass(frozen=True)
class StabilityReport:
    kappa_p: float
    kappa_v: float
    kappa_r: float
    B_norm: float
    margin: float  # kappa_r - B_norm^2 / (2 kappa_v)
    condition_holds: bool
    alpha: float  # decay rate; positive iff the condition holds

    def as_dict(self) -> dict:
        return {
            "kappa_p": self.kappa_p,
            "kappa_v": self.kappa_v,
            "kappa_r": self.kappa_r,
            "B_norm": self.B_norm,
            "margin": self.margin,
            "condition_holds": self.condition_holds,
            "alpha": self.alpha,
        }


@dataclass(frozen=True)
class EnvelopeResult:
    passed: bool
    applicable: bool
    max_ratio: float  # max over samples of V(t) / (V(0) exp(-2 alpha t))
    fitted_exponent: float  # least-squares slope of log V(t)


def gain_condition_check(gains: Gains, T_bar_max: float) -> StabilityReport:
    """Evaluate the eigenvalue gain condition at the worst-case thrust.

    ||B|| = T_bar_max since the spectral norm of a unit-vector skew is 1.
    """
    if T_bar_max < 0.0:
        raise ValueError(f"T_bar_max must be nonnegative, got {T_bar_max}")
    k_p, k_v, k_r = gains.min_eigenvalues()
    B_norm = float(T_bar_max)
    margin = k_r - B_norm**2 / (2.0 * k_v)
    alpha = min(0.5 * k_p, 0.5 * k_v, margin)
    return StabilityReport(
        kappa_p=k_p,
        kappa_v=k_v,
        kappa_r=k_r,
        B_norm=B_norm,
        margin=margin,
        condition_holds=margin > 0.0,
        alpha=alpha,
    )


def lyapunov_value(e_p, e_v, e_r) -> float:
    e_p = np.asarray(e_p, dtype=float)
    e_v = np.asarray(e_v, dtype=float)
    e_r = np.asarray(e_r, dtype=float)
    return 0.5 * float(e_p @ e_p + e_v @ e_v + e_r @ e_r)


def envelope_check(t, V, alpha: float, tol: float = 0.05) -> EnvelopeResult:
    """Check V(t) <= V(0) exp(-2 alpha t) (1 + tol) at every sample.

    Returns not-applicable (trivially unchecked) when alpha <= 0. The fitted
    exponent is the least-squares slope of log V over samples with V > 0.
    """
    t = np.asarray(t, dtype=float)
    V = np.asarray(V, dtype=float)
    if t.shape != V.shape or t.ndim != 1 or t.size == 0:
        raise ValueError("t and V must be equal-length 1-d arrays")
    if alpha <= 0.0:
        return EnvelopeResult(passed=False, applicable=False, max_ratio=math.inf, fitted_exponent=0.0)
    V0 = float(V[0])
    if V0 == 0.0:
        return EnvelopeResult(
            passed=bool(np.all(V == 0.0)), applicable=True, max_ratio=0.0, fitted_exponent=0.0
        )
    bound = V0 * np.exp(-2.0 * alpha * (t - t[0]))
    ratio = V / bound
    mask = V > 0.0
    if mask.sum() >= 2:
        A = np.vstack([t[mask], np.ones(int(mask.sum()))]).T
        slope = float(np.linalg.lstsq(A, np.log(V[mask]), rcond=None)[0][0])
    else:
        slope = 0.0
    max_ratio = float(ratio.max())
    return EnvelopeResult(
        passed=max_ratio <= 1.0 + tol,
        applicable=True,
        max_ratio=max_ratio,
        fitted_exponent=slope,
    )


def skew_quadratic_identity_test(omega, x) -> float:
    """|x^T hat(omega) x|: the proof's vanishing-rotation-term identity."""
    omega = np.asarray(omega, dtype=float)
    x = np.asarray(x, dtype=float)
    return abs(float(x @ (hat(omega) @ x)))


def error_system_matrix(gains: Gains, T_bar: float, e_T, omega_bar) -> np.ndarray:
    """9x9 system matrix of the cascaded closed-loop error dynamics."""
    e_T = np.asarray(e_T, dtype=float)
    W = hat(omega_bar)
    B = -float(T_bar) * hat(e_T)
    A = np.zeros((9, 9))
    A[0:3, 0:3] = -W - gains.K_p
    A[0:3, 3:6] = np.eye(3)
    A[3:6, 3:6] = -W - gains.K_v
    A[3:6, 6:9] = B
    A[6:9, 6:9] = -W - gains.K_r
    return A


def integrate_error_system(
    gains: Gains, T_bar: float, e_T, omega_bar, z0, horizon: float, h: float
):
    """RK4 integration of the linear error system; returns (t, V) samples.

    Bypasses the plant and controller entirely: this is the theorem's system
    integrated directly.
    """
    A = error_system_matrix(gains, T_bar, e_T, omega_bar)
    n = int(round(horizon / h))
    z = np.asarray(z0, dtype=float).reshape(9).copy()
    t = np.empty(n + 1)
    V = np.empty(n + 1)
    for k in range(n + 1):
        t[k] = k * h
        V[k] = 0.5 * float(z @ z)
        if k < n:
            k1 = A @ z
            k2 = A @ (z + 0.5 * h * k1)
            k3 = A @ (z + 0.5 * h * k2)
            k4 = A @ (z + h * k3)
            z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return t, V
