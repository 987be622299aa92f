"""SE2(3) group machinery.

The 5x5 embedding carries (R, v, p); tangent 9-vectors are ordered
[xi_p, xi_v, xi_r] everywhere. Algebra matrices have zero bottom rows so that
the exponential lands in the group.

adjoint(X) implements the inverse-conjugation convention of the model
(Ad_[X] z = vee(X^-1 z^wedge X)); jl_inv_se23 / jr_inv_se23 are the exact
inverses of the series Jacobians sum_k (+-ad_xi)^k/(k+1)!, the convention
pinned by the first-order BCH expansion log(exp(xi) exp(eps zeta)) =
xi + eps * jr_inv_se23(xi) zeta + O(eps^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .so3_core import exp_so3, hat, jl_coupling, jl_so3, log_so3, s_l

# Block slices of the canonical [p, v, r] tangent ordering.
XI_P = slice(0, 3)
XI_V = slice(3, 6)
XI_R = slice(6, 9)

# Constant normalizer matrix: couples the velocity column into the position
# column of the embedding; C @ C = 0.
C_MATRIX = np.zeros((5, 5))
C_MATRIX[3, 4] = 1.0

_I9 = np.eye(9)


@dataclass(frozen=True)
class GroupElement:
    """SE2(3) element: attitude R, inertial velocity v, inertial position p."""

    R: np.ndarray
    v: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        v = np.asarray(self.v, dtype=float).reshape(3)
        p = np.asarray(self.p, dtype=float).reshape(3)
        if R.shape != (3, 3):
            raise ValueError(f"R must be 3x3, got {R.shape}")
        if np.abs(R.T @ R - np.eye(3)).max() > 1e-9:
            raise ValueError("R is not orthonormal within 1e-9")
        if abs(np.linalg.det(R) - 1.0) > 1e-9:
            raise ValueError("det(R) != 1 within 1e-9")
        if not (np.isfinite(v).all() and np.isfinite(p).all()):
            raise ValueError("v, p must be finite")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "p", p)

    @staticmethod
    def identity() -> "GroupElement":
        return GroupElement(np.eye(3), np.zeros(3), np.zeros(3))

    def as_matrix(self) -> np.ndarray:
        M = np.eye(5)
        M[0:3, 0:3] = self.R
        M[0:3, 3] = self.v
        M[0:3, 4] = self.p
        return M

    @staticmethod
    def from_matrix(M) -> "GroupElement":
        M = np.asarray(M, dtype=float)
        if M.shape != (5, 5):
            raise ValueError(f"expected 5x5 matrix, got {M.shape}")
        bottom = np.array([[0.0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
        if np.abs(M[3:5, :] - bottom).max() > 1e-9:
            raise ValueError("bottom rows are not the SE2(3) identity block")
        return GroupElement(M[0:3, 0:3], M[0:3, 3], M[0:3, 4])


def compose(A: GroupElement, B: GroupElement) -> GroupElement:
    """Group product; equals the 5x5 matrix product in the embedding."""
    return GroupElement(A.R @ B.R, A.v + A.R @ B.v, A.p + A.R @ B.p)


def inverse(X: GroupElement) -> GroupElement:
    return GroupElement(X.R.T, -(X.R.T @ X.v), -(X.R.T @ X.p))


def wedge(xi) -> np.ndarray:
    """9-vector -> 5x5 algebra matrix (zero bottom rows)."""
    xi = np.asarray(xi, dtype=float).reshape(9)
    M = np.zeros((5, 5))
    M[0:3, 0:3] = hat(xi[XI_R])
    M[0:3, 3] = xi[XI_V]
    M[0:3, 4] = xi[XI_P]
    return M


def vee9(M) -> np.ndarray:
    """Inverse of wedge; rejects matrices violating the algebra shape."""
    M = np.asarray(M, dtype=float)
    if M.shape != (5, 5):
        raise ValueError(f"expected 5x5 matrix, got {M.shape}")
    if np.abs(M[3:5, :]).max() > 1e-9:
        raise ValueError("bottom rows must vanish for an algebra element")
    W = M[0:3, 0:3]
    if np.abs(W + W.T).max() > 1e-9:
        raise ValueError("top-left block must be skew within 1e-9")
    r = 0.5 * np.array([W[2, 1] - W[1, 2], W[0, 2] - W[2, 0], W[1, 0] - W[0, 1]])
    return np.concatenate([M[0:3, 4], M[0:3, 3], r])


def exp_se23(xi) -> GroupElement:
    """Exponential: R = exp(xi_r), v = J_l(xi_r) xi_v, p = J_l(xi_r) xi_p."""
    xi = np.asarray(xi, dtype=float).reshape(9)
    J = jl_so3(xi[XI_R])
    return GroupElement(exp_so3(xi[XI_R]), J @ xi[XI_V], J @ xi[XI_P])


def log_se23(X: GroupElement) -> np.ndarray:
    """Principal-branch logarithm; inverse of exp_se23."""
    r = log_so3(X.R)
    S = s_l(r)
    return np.concatenate([S @ X.p, S @ X.v, r])


def left_error(Xbar: GroupElement, X: GroupElement) -> GroupElement:
    """Left-invariant error eta = Xbar^-1 X."""
    return compose(inverse(Xbar), X)


def adjoint(X: GroupElement) -> np.ndarray:
    """9x9 matrix of z -> vee(X^-1 z^wedge X) in [p, v, r] coordinates."""
    Rt = X.R.T
    A = np.zeros((9, 9))
    A[XI_P, XI_P] = Rt
    A[XI_V, XI_V] = Rt
    A[XI_R, XI_R] = Rt
    A[XI_P, XI_R] = -Rt @ hat(X.p)
    A[XI_V, XI_R] = -Rt @ hat(X.v)
    return A


def ad_small(xi) -> np.ndarray:
    """9x9 bracket matrix: ad_small(xi) @ z == vee([xi^wedge, z^wedge])."""
    xi = np.asarray(xi, dtype=float).reshape(9)
    W = hat(xi[XI_R])
    A = np.zeros((9, 9))
    A[XI_P, XI_P] = W
    A[XI_V, XI_V] = W
    A[XI_R, XI_R] = W
    A[XI_P, XI_R] = hat(xi[XI_P])
    A[XI_V, XI_R] = hat(xi[XI_V])
    return A


def c_commutator(xi) -> np.ndarray:
    """vee([xi^wedge, C]) = (xi_v, 0, 0): the kinematic coupling term."""
    xi = np.asarray(xi, dtype=float).reshape(9)
    out = np.zeros(9)
    out[XI_P] = xi[XI_V]
    return out


def jl_inv_se23(xi) -> np.ndarray:
    """Inverse left Jacobian of SE2(3) as a 9x9 block matrix.

    Exact inverse of sum_k (ad_xi)^k/(k+1)!: diagonal blocks S_l(xi_r),
    (p,r)/(v,r) blocks -S_l Q(xi_r; xi_p/v) S_l with Q = jl_coupling, and a
    zero (p,v) block. Requires ||xi_r|| < pi.
    """
    xi = np.asarray(xi, dtype=float).reshape(9)
    r = xi[XI_R]
    S = s_l(r)
    M = np.zeros((9, 9))
    M[XI_P, XI_P] = S
    M[XI_V, XI_V] = S
    M[XI_R, XI_R] = S
    M[XI_P, XI_R] = -S @ jl_coupling(r, xi[XI_P]) @ S
    M[XI_V, XI_R] = -S @ jl_coupling(r, xi[XI_V]) @ S
    return M


def jr_inv_se23(xi) -> np.ndarray:
    """Inverse right Jacobian; mirror identity J_r^-1(xi) = J_l^-1(-xi)."""
    return jl_inv_se23(-np.asarray(xi, dtype=float).reshape(9))
