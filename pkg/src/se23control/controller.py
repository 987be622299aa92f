"""Log-linear backstepping controller.

Three cascaded laws on the log-error state xi = (xi_p, xi_v, xi_r):

  position:  xi_v^d = D3(xi) omega_til - K_p xi_p
  velocity:  B xi_r^d - S_r e_T T_til
               = D4(xi) omega_til + S_l Rbar^T g_til
                 + d(xi_v^d)/dt + omega_bar x xi_v^d - K_v e_v
  attitude:  omega_til = -J_r^SO3(xi_r) (omega_bar x xi_r^d
                 + d(xi_r^d)/dt - K_r e_r)

with B = -T_bar [e_T]x, D3/D4 the rotation-coupling blocks of J_r^-1, and
e_v = xi_v - xi_v^d, e_r = xi_r - xi_r^d. Substituting the laws into the
log-error field gives exactly the cascaded error system of the stability
theorem. Physical controls are recovered as omega = omega_bar - omega_til,
T = T_bar - T_til (clamped to [0, T_max]).

Discretization: the laws couple algebraically (xi_v^d needs omega_til and
T_til, which need the setpoint derivatives), so each control step solves the
full set simultaneously - one affine 10x10 system in (omega_til, T_til,
xi_v^d, xi_r^d) with setpoint derivatives as backward differences of the
solved setpoint sequence (backward-Euler in the setpoints, A-stable). The
sequential one-step-lag alternative is violently unstable at aggressive
attitude gains; see the design notes. The first step is solved with zero
setpoint derivatives (static consistent initialization). The null freedom of
the velocity solve (setpoint spin about e_T) is removed by e_T^T xi_r^d = 0,
which coincides with the minimum-norm solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import Environment, ReferenceSample, T_MIN, ControlInput
from .log_error_dynamics import InputDeviation
from .se23_group import XI_P, XI_R, XI_V, jr_inv_se23
from .so3_core import hat, jr_so3, s_l, s_r


class ControllerError(RuntimeError):
    """Raised when a control solve is singular or ill-posed."""


@dataclass(frozen=True)
class Gains:
    """Symmetric positive-definite 3x3 gains for the three loops."""

    K_p: np.ndarray
    K_v: np.ndarray
    K_r: np.ndarray

    def __post_init__(self):
        for name in ("K_p", "K_v", "K_r"):
            K = np.asarray(getattr(self, name), dtype=float)
            if K.shape != (3, 3):
                raise ValueError(f"{name} must be 3x3, got {K.shape}")
            if np.abs(K - K.T).max() > 1e-12:
                raise ValueError(f"{name} is not symmetric within 1e-12")
            if np.linalg.eigvalsh(K).min() <= 0.0:
                raise ValueError(f"{name} is not positive definite")
            object.__setattr__(self, name, K)

    @staticmethod
    def from_scalars(k_p: float, k_v: float, k_r: float) -> "Gains":
        return Gains(k_p * np.eye(3), k_v * np.eye(3), k_r * np.eye(3))

    def min_eigenvalues(self) -> tuple[float, float, float]:
        return tuple(float(np.linalg.eigvalsh(K).min()) for K in (self.K_p, self.K_v, self.K_r))


@dataclass(frozen=True)
class ControllerState:
    """Previous virtual setpoints, their rates, and previous deviations."""

    xi_v_des: np.ndarray | None = None
    xi_r_des: np.ndarray | None = None
    xi_v_des_dot: np.ndarray = field(default_factory=lambda: np.zeros(3))
    xi_r_des_dot: np.ndarray = field(default_factory=lambda: np.zeros(3))
    omega_til: np.ndarray = field(default_factory=lambda: np.zeros(3))
    T_til: float = 0.0


@dataclass(frozen=True)
class BacksteppingErrors:
    e_p: np.ndarray
    e_v: np.ndarray
    e_r: np.ndarray

    def lyapunov(self) -> float:
        return 0.5 * float(self.e_p @ self.e_p + self.e_v @ self.e_v + self.e_r @ self.e_r)


@dataclass(frozen=True)
class StepDiagnostics:
    errors: BacksteppingErrors
    V: float
    omega_til: np.ndarray
    T_til: float
    xi_v_des: np.ndarray
    xi_r_des: np.ndarray
    saturated: bool
    # max-abs residuals of the three law equations at the solved point
    residual_position: float
    residual_velocity: float
    residual_attitude: float


def _coupling_blocks(xi, env: Environment):
    Jr_inv = jr_inv_se23(xi)
    D3 = Jr_inv[XI_P, XI_R]
    D4 = Jr_inv[XI_V, XI_R]
    return D3, D4


def position_law(xi, omega_til, T_til, g_til, ref: ReferenceSample, env: Environment, gains: Gains) -> np.ndarray:
    """Velocity setpoint cancelling the couplings in the position row.

    The position row of the log-error field carries no thrust or gravity
    feed-through (the (p,v) Jacobian blocks vanish), so only the rotation
    coupling D3 omega_til appears.
    """
    xi = np.asarray(xi, dtype=float).reshape(9)
    D3, _ = _coupling_blocks(xi, env)
    return D3 @ np.asarray(omega_til, dtype=float) - gains.K_p @ xi[XI_P]


def velocity_solve(
    e_v, xi, ref: ReferenceSample, omega_til, g_til, xi_v_des_rate, gains: Gains, env: Environment
) -> tuple[np.ndarray, float]:
    """Solve B xi_r^d - S_r e_T T_til = rhs for the attitude setpoint and T_til.

    Minimum-norm solution of the underdetermined 3x4 system; the null
    direction (e_T, 0) is excluded, so e_T^T xi_r^d = 0 exactly. xi_v_des_rate
    is the full rate term d(xi_v^d)/dt + omega_bar x xi_v^d.
    """
    xi = np.asarray(xi, dtype=float).reshape(9)
    if ref.T_bar < T_MIN:
        raise ControllerError(f"velocity solve singular: T_bar = {ref.T_bar:g} below {T_MIN:g}")
    _, D4 = _coupling_blocks(xi, env)
    Sr = s_r(xi[XI_R])
    col = Sr @ env.e_T
    if abs(env.e_T @ col) < 1e-8:
        raise ControllerError("velocity solve singular: thrust column degenerate")
    B = -ref.T_bar * hat(env.e_T)
    rhs = (
        D4 @ np.asarray(omega_til, dtype=float)
        + s_l(xi[XI_R]) @ (ref.Xbar.R.T @ np.asarray(g_til, dtype=float))
        + np.asarray(xi_v_des_rate, dtype=float)
        - gains.K_v @ np.asarray(e_v, dtype=float)
    )
    A = np.column_stack([B, -col])
    sol, _, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < 3:
        raise ControllerError("velocity solve singular: coefficient matrix rank-deficient")
    xi_r_des, T_til = sol[0:3], float(sol[3])
    if np.abs(A @ sol - rhs).max() > 1e-10:
        raise ControllerError("velocity solve residual exceeds 1e-10")
    return xi_r_des, T_til


def attitude_law(xi_r, xi_r_des, xi_r_des_dot, omega_bar, gains: Gains) -> np.ndarray:
    """Angular-velocity deviation regulating e_r = xi_r - xi_r^d.

    Inverts the rotation-row input block (-S_r) of the log-error field, so
    substitution yields e_r-dot = -omega_bar x e_r - K_r e_r.
    """
    xi_r = np.asarray(xi_r, dtype=float).reshape(3)
    return -(
        jr_so3(xi_r)
        @ (
            np.cross(omega_bar, xi_r_des)
            + np.asarray(xi_r_des_dot, dtype=float)
            - gains.K_r @ (xi_r - np.asarray(xi_r_des, dtype=float))
        )
    )


def control_step(
    xi,
    ref: ReferenceSample,
    env: Environment,
    gains: Gains,
    state: ControllerState,
    h: float,
    T_max: float | None = None,
) -> tuple[ControlInput, ControllerState, StepDiagnostics]:
    """One implicit controller update; returns physical controls and diagnostics."""
    if h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    xi = np.asarray(xi, dtype=float).reshape(9)
    if T_max is None:
        T_max = 4.0 * float(np.linalg.norm(env.g))
    if ref.T_bar < T_MIN:
        raise ControllerError(f"reference thrust {ref.T_bar:g} below {T_MIN:g}")

    D3, D4 = _coupling_blocks(xi, env)
    r = xi[XI_R]
    Sr = s_r(r)
    Sl = s_l(r)
    B = -ref.T_bar * hat(env.e_T)
    W = hat(ref.omega_bar)
    eT = env.e_T
    g_term = Sl @ (ref.Xbar.R.T @ ref.g_tilde)

    # Unknowns y = [omega_til (0:3), T_til (3), xi_v^d (4:7), xi_r^d (7:10)].
    A = np.zeros((10, 10))
    b = np.zeros(10)
    A[0:3, 0:3] = -D3
    A[0:3, 4:7] = np.eye(3)
    b[0:3] = -gains.K_p @ xi[XI_P]

    A[3:6, 0:3] = -D4
    A[3:6, 3] = -(Sr @ eT)
    A[3:6, 4:7] = -W - gains.K_v
    A[3:6, 7:10] = B
    b[3:6] = -gains.K_v @ xi[XI_V] + g_term

    A[6:9, 0:3] = Sr
    A[6:9, 7:10] = W + gains.K_r
    b[6:9] = gains.K_r @ xi[XI_R]

    A[9, 7:10] = eT

    if state.xi_v_des is not None:
        A[3:6, 4:7] -= np.eye(3) / h
        b[3:6] -= state.xi_v_des / h
        A[6:9, 7:10] += np.eye(3) / h
        b[6:9] += state.xi_r_des / h

    try:
        y = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise ControllerError(f"control solve singular: {exc}") from exc
    if not np.isfinite(y).all():
        raise ControllerError("control solve produced non-finite values")

    omega_til, T_til = y[0:3], float(y[3])
    sv, sr = y[4:7], y[7:10]
    if state.xi_v_des is not None:
        sv_dot = (sv - state.xi_v_des) / h
        sr_dot = (sr - state.xi_r_des) / h
    else:
        sv_dot = np.zeros(3)
        sr_dot = np.zeros(3)

    errors = BacksteppingErrors(e_p=xi[XI_P].copy(), e_v=xi[XI_V] - sv, e_r=xi[XI_R] - sr)

    res_pos = float(np.abs(sv - position_law(xi, omega_til, T_til, ref.g_tilde, ref, env, gains)).max())
    res_vel = float(
        np.abs(
            B @ sr
            - (Sr @ eT) * T_til
            - (D4 @ omega_til + g_term + sv_dot + np.cross(ref.omega_bar, sv) - gains.K_v @ errors.e_v)
        ).max()
    )
    res_att = float(
        np.abs(omega_til - attitude_law(xi[XI_R], sr, sr_dot, ref.omega_bar, gains)).max()
    )

    T_cmd = ref.T_bar - T_til
    saturated = not (0.0 <= T_cmd <= T_max)
    u = ControlInput(min(max(T_cmd, 0.0), T_max), ref.omega_bar - omega_til)

    new_state = ControllerState(
        xi_v_des=sv,
        xi_r_des=sr,
        xi_v_des_dot=sv_dot,
        xi_r_des_dot=sr_dot,
        omega_til=omega_til,
        T_til=T_til,
    )
    diag = StepDiagnostics(
        errors=errors,
        V=errors.lyapunov(),
        omega_til=omega_til,
        T_til=T_til,
        xi_v_des=sv,
        xi_r_des=sr,
        saturated=saturated,
        residual_position=res_pos,
        residual_velocity=res_vel,
        residual_attitude=res_att,
    )
    return u, new_state, diag


def deviation_from_diag(diag: StepDiagnostics, g_til=None) -> InputDeviation:
    """InputDeviation actually commanded this step (pre-saturation)."""
    return InputDeviation(
        omega_til=diag.omega_til,
        T_til=diag.T_til,
        g_til=np.zeros(3) if g_til is None else g_til,
    )
