"""Rotation-group primitives.

hat/vee, the SO(3) exponential and principal-branch logarithm, the left/right
Jacobians with closed-form inverses, the translation kernels Q_r / Q_l with
their tensor-map variants, and the rotation-translation coupling kernel used
by the 9x9 Jacobian inverses.

All closed forms switch to 4th-order Taylor series below THETA_SWITCH to avoid
0/0 evaluation; truncation error there is below machine precision.
"""

from __future__ import annotations

import math

import numpy as np

# Angle below which every scalar coefficient uses its Taylor series.
THETA_SWITCH = 1e-4

# Guard band (radians) around theta = pi for the principal-branch logarithm.
EPS_BRANCH = 1e-6

_I3 = np.eye(3)


class PrincipalBranchError(ValueError):
    """Rotation angle too close to pi for a well-conditioned logarithm."""


def hat(omega) -> np.ndarray:
    """Skew matrix of a 3-vector: hat(w) @ x == cross(w, x)."""
    x, y, z = np.asarray(omega, dtype=float)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(M) -> np.ndarray:
    """Inverse of hat. Rejects matrices that are not skew within 1e-9."""
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        raise ValueError(f"vee expects a 3x3 matrix, got shape {M.shape}")
    if np.abs(M + M.T).max() > 1e-9:
        raise ValueError("vee: input is not skew-symmetric within 1e-9")
    return 0.5 * np.array([M[2, 1] - M[1, 2], M[0, 2] - M[2, 0], M[1, 0] - M[0, 1]])


def _theta(omega) -> float:
    return float(np.linalg.norm(omega))


def _sinc(theta: float, series: bool | None = None) -> float:
    # sin(t)/t
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(theta) / theta


def _cosc(theta: float, series: bool | None = None) -> float:
    # (1 - cos t)/t^2
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    s = math.sin(0.5 * theta)
    return 2.0 * s * s / (theta * theta)


def _sinc3(theta: float, series: bool | None = None) -> float:
    # (t - sin t)/t^3
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0
    return (theta - math.sin(theta)) / theta**3


def _sl_w2(theta: float, series: bool | None = None) -> float:
    # W^2 coefficient of the inverse left Jacobian:
    # 1/t^2 - (1 + cos t)/(2 t sin t) == (1 - (t/2) cot(t/2)) / t^2.
    # The cot form has no 0/0 at t = pi (the removable singularity of the
    # printed expression) and stays finite up to the genuine pole at 2*pi.
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    return (1.0 - 0.5 * theta / math.tan(0.5 * theta)) / (theta * theta)


def _q1(theta: float, series: bool | None = None) -> float:
    # (sin t - t cos t)/t^3
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 / 3.0 - t2 / 30.0 + t2 * t2 / 840.0
    return (math.sin(theta) - theta * math.cos(theta)) / theta**3


def _q2(theta: float, series: bool | None = None) -> float:
    # (t^2/2 - t sin t + 1 - cos t)/t^4, evaluated cancellation-free via
    # t^2/2 - t sin t + 1 - cos t == 2[(t/2 - sin(t/2)cos(t/2))^2 + sin(t/2)^4]
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 0.125 - t2 / 144.0 + t2 * t2 / 5760.0
    h = 0.5 * theta
    s, c = math.sin(h), math.cos(h)
    return 2.0 * ((h - s * c) ** 2 + s**4) / theta**4


def _coupling_a2(theta: float, series: bool | None = None) -> float:
    # (t^2 + 2 cos t - 2) / (2 t^4)
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 / 24.0 - t2 / 720.0 + t2 * t2 / 40320.0
    s = math.sin(0.5 * theta)
    return (theta * theta - 4.0 * s * s) / (2.0 * theta**4)


def _coupling_a3(theta: float, series: bool | None = None) -> float:
    # (2t - 3 sin t + t cos t) / (2 t^5)
    if series if series is not None else theta < THETA_SWITCH:
        t2 = theta * theta
        return 1.0 / 120.0 - t2 / 2520.0 + t2 * t2 / 120960.0
    return (2.0 * theta - 3.0 * math.sin(theta) + theta * math.cos(theta)) / (2.0 * theta**5)


def exp_so3(omega) -> np.ndarray:
    """Rodrigues exponential: rotation by angle ||omega|| about omega."""
    omega = np.asarray(omega, dtype=float)
    t = _theta(omega)
    W = hat(omega)
    return _I3 + _sinc(t) * W + _cosc(t) * (W @ W)


def log_so3(R) -> np.ndarray:
    """Principal-branch rotation logarithm, ||result|| <= pi - EPS_BRANCH.

    Raises PrincipalBranchError when the rotation angle is within EPS_BRANCH
    of pi.
    """
    R = np.asarray(R, dtype=float)
    s = 0.5 * np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    c = 0.5 * (np.trace(R) - 1.0)
    theta = math.atan2(float(np.linalg.norm(s)), c)
    if theta >= math.pi - EPS_BRANCH:
        raise PrincipalBranchError(
            f"rotation angle {theta:.9f} within {EPS_BRANCH:g} of pi; "
            "logarithm branch is ill-conditioned"
        )
    if theta < THETA_SWITCH:
        t2 = theta * theta
        return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * s
    return (theta / math.sin(theta)) * s


def jl_so3(omega) -> np.ndarray:
    """Left Jacobian J_l = I + (1-cos t)/t^2 W + (t - sin t)/t^3 W^2."""
    omega = np.asarray(omega, dtype=float)
    t = _theta(omega)
    W = hat(omega)
    return _I3 + _cosc(t) * W + _sinc3(t) * (W @ W)


def jr_so3(omega) -> np.ndarray:
    """Right Jacobian, J_r(w) = J_l(-w)."""
    return jl_so3(-np.asarray(omega, dtype=float))


def s_l(omega) -> np.ndarray:
    """Inverse left Jacobian S_l = I - W/2 + c(t) W^2; pole at ||w|| = 2*pi."""
    omega = np.asarray(omega, dtype=float)
    t = _theta(omega)
    if t >= 2.0 * math.pi - EPS_BRANCH:
        raise ValueError(f"s_l: ||omega|| = {t:.9f} at or beyond the 2*pi pole")
    W = hat(omega)
    return _I3 - 0.5 * W + _sl_w2(t) * (W @ W)


def s_r(omega) -> np.ndarray:
    """Inverse right Jacobian, S_r(w) = S_l(-w)."""
    return s_l(-np.asarray(omega, dtype=float))


def q_r(omega) -> np.ndarray:
    """Translation kernel Q_r = integral_0^1 s exp(s W) ds (closed form)."""
    omega = np.asarray(omega, dtype=float)
    t = _theta(omega)
    W = hat(omega)
    return 0.5 * _I3 + _q1(t) * W + _q2(t) * (W @ W)


def q_l(omega) -> np.ndarray:
    """Translation kernel Q_l = J_l - Q_r (exact by the defining relation)."""
    omega = np.asarray(omega, dtype=float)
    return jl_so3(omega) - q_r(omega)


def q_tensor(omega, x, side: str = "right") -> np.ndarray:
    """Tensor-map kernel (Q(w) x)^hat; side selects Q_r or Q_l."""
    x = np.asarray(x, dtype=float)
    if side == "right":
        return hat(q_r(omega) @ x)
    if side == "left":
        return hat(q_l(omega) @ x)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def jl_coupling(omega, x) -> np.ndarray:
    """Rotation-translation coupling block of the 9-dim left Jacobian.

    Closed form of sum_{k>=1} 1/(k+1)! sum_{j=0}^{k-1} W^j X W^(k-1-j) with
    W = hat(omega), X = hat(x); linear in x.
    """
    omega = np.asarray(omega, dtype=float)
    x = np.asarray(x, dtype=float)
    t = _theta(omega)
    W = hat(omega)
    X = hat(x)
    WX = W @ X
    XW = X @ W
    WXW = WX @ W
    return (
        0.5 * X
        + _sinc3(t) * (WX + XW + WXW)
        + _coupling_a2(t) * (W @ WX + XW @ W - 3.0 * WXW)
        + _coupling_a3(t) * (WXW @ W + W @ WXW)
    )


def _branch_probe(omega, x, series: bool) -> dict[str, np.ndarray]:
    """Assemble every matrix form with the branch forced; test hook only."""
    omega = np.asarray(omega, dtype=float)
    x = np.asarray(x, dtype=float)
    t = _theta(omega)
    W = hat(omega)
    W2 = W @ W
    X = hat(x)
    WX, XW = W @ X, X @ W
    WXW = WX @ W
    return {
        "exp": _I3 + _sinc(t, series) * W + _cosc(t, series) * W2,
        "jl": _I3 + _cosc(t, series) * W + _sinc3(t, series) * W2,
        "sl": _I3 - 0.5 * W + _sl_w2(t, series) * W2,
        "qr": 0.5 * _I3 + _q1(t, series) * W + _q2(t, series) * W2,
        "coupling": (
            0.5 * X
            + _sinc3(t, series) * (WX + XW + WXW)
            + _coupling_a2(t, series) * (W @ WX + XW @ W - 3.0 * WXW)
            + _coupling_a3(t, series) * (WXW @ W + W @ WXW)
        ),
    }
