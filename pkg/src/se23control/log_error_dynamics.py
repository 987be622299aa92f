"""Exact log-error dynamics of the mixed-invariant model.

For eta = Xbar^-1 X and xi = log(eta), the error vector field is

    xidot = -ad_nbar xi + ([xi^wedge, C])^vee
            - J_r^-1(xi) ntil - J_l^-1(xi) Ad(Xbar) mtil

with nbar = (0, T_bar e_T, omega_bar), ntil = (0, T_til e_T, omega_til),
mtil = (0, g_til, 0) and tilde quantities defined reference-minus-actual.
The minus signs on the input terms are pinned by the finite-difference
trajectory oracle (the printed form carries them with opposite sign).

The field is exact for finite xi and linear in xi when ntil = mtil = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import Environment, ReferenceSample
from .se23_group import (
    XI_P,
    XI_R,
    XI_V,
    GroupElement,
    ad_small,
    c_commutator,
    jl_inv_se23,
    jr_inv_se23,
    left_error,
    log_se23,
)


@dataclass(frozen=True)
class InputDeviation:
    """Reference-minus-actual input deviations: omega_til, T_til, g_til."""

    omega_til: np.ndarray
    T_til: float
    g_til: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "omega_til", np.asarray(self.omega_til, dtype=float).reshape(3))
        object.__setattr__(self, "g_til", np.asarray(self.g_til, dtype=float).reshape(3))
        object.__setattr__(self, "T_til", float(self.T_til))


def error_state(Xbar: GroupElement, X: GroupElement) -> np.ndarray:
    """xi = log(Xbar^-1 X), the left-invariant error in log coordinates."""
    return log_se23(left_error(Xbar, X))


def input_matrix(xi, env: Environment) -> np.ndarray:
    """9x4 matrix G with G @ [omega_til; T_til] = J_r^-1(xi) (0, T_til e_T, omega_til).

    Block layout at xi = 0: omega_til enters the rotation rows with identity,
    T_til enters the velocity rows along e_T.
    """
    Jr_inv = jr_inv_se23(xi)
    G = np.empty((9, 4))
    G[:, 0:3] = Jr_inv[:, XI_R]
    G[:, 3] = Jr_inv[:, XI_V] @ env.e_T
    return G


def disturbance_matrix(xi, Xbar: GroupElement) -> np.ndarray:
    """9x3 matrix D with D @ g_til = J_l^-1(xi) Ad(Xbar) (0, g_til, 0).

    Ad(Xbar) maps the inertial gravity deviation into the body frame:
    Ad(Xbar) (0, g_til, 0) = (0, Rbar^T g_til, 0).
    """
    Jl_inv = jl_inv_se23(xi)
    return Jl_inv[:, XI_V] @ Xbar.R.T


def error_rhs(
    xi, ref: ReferenceSample, dev: InputDeviation, env: Environment
) -> np.ndarray:
    """Exact xidot; reduces to the linear field (-ad_nbar + A_C) xi for zero deviations."""
    xi = np.asarray(xi, dtype=float).reshape(9)
    nbar = np.concatenate([np.zeros(3), ref.T_bar * env.e_T, ref.omega_bar])
    out = -(ad_small(nbar) @ xi) + c_commutator(xi)
    if dev.T_til != 0.0 or dev.omega_til.any():
        out -= input_matrix(xi, env) @ np.concatenate([dev.omega_til, [dev.T_til]])
    if dev.g_til.any():
        out -= disturbance_matrix(xi, ref.Xbar) @ dev.g_til
    return out


def zero_input_matrix(ref: ReferenceSample, env: Environment) -> np.ndarray:
    """System matrix -ad_nbar + A_C of the zero-deviation (linear) error field."""
    nbar = np.concatenate([np.zeros(3), ref.T_bar * env.e_T, ref.omega_bar])
    A = -ad_small(nbar)
    A[XI_P, XI_V] += np.eye(3)
    return A
