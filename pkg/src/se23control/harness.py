"""Scenario configuration, closed-loop simulation, and trajectory logging.

Scenario files are YAML; every validation failure names the offending field.
Logs are CSV with a fixed 25-column schema (t, xi blocks, error blocks,
inputs, V, envelope bound), written as 17-significant-digit decimals so a
parse round-trip is bit-exact, plus a JSON sidecar <path>.meta.json carrying
the scenario and the stability report.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .controller import ControllerError, ControllerState, Gains, control_step
from .dynamics import (
    ControlInput,
    Environment,
    HelixReference,
    HoverReference,
    ReferenceSample,
    step,
)
from .log_error_dynamics import error_state
from .se23_group import GroupElement, compose, exp_se23
from .so3_core import PrincipalBranchError, exp_so3
from .stability import StabilityReport, gain_condition_check

ENV_OUT_DIR = "SE23CTL_OUT_DIR"

CSV_COLUMNS = (
    ["t"]
    + [f"xi_{b}_{a}" for b in ("p", "v", "r") for a in "xyz"]
    + [f"e_{b}_{a}" for b in ("p", "v", "r") for a in "xyz"]
    + ["thrust", "omega_x", "omega_y", "omega_z", "V", "v_bound"]
)

STATES_COLUMNS = ["t"] + [f"p_{a}" for a in "xyz"] + [f"p_bar_{a}" for a in "xyz"]


class ScenarioError(ValueError):
    """Scenario file violates the schema; message names the field."""


@dataclass(frozen=True)
class DisturbanceWindow:
    start: float
    end: float
    g_tilde: np.ndarray


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str  # hover | circle | helix
    horizon: float
    timestep: float
    env: Environment
    gains: Gains
    xi0: np.ndarray
    seed: int = 0
    radius: float = 1.0
    period: float = 8.0
    climb_rate: float = 0.0
    center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t_max: float | None = None
    disturbance: tuple[DisturbanceWindow, ...] = ()

    def g_tilde_at(self, t: float) -> np.ndarray:
        out = np.zeros(3)
        for w in self.disturbance:
            if w.start <= t < w.end:
                out = out + w.g_tilde
        return out

    def build_reference(self):
        if self.kind == "hover":
            return HoverReference(self.env, position=self.center)
        if self.kind == "circle":
            return HelixReference(self.env, self.radius, self.period, 0.0, self.center)
        if self.kind == "helix":
            return HelixReference(self.env, self.radius, self.period, self.climb_rate, self.center)
        raise ScenarioError(f"scenario: unknown kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {
            "scenario": self.kind,
            "horizon": self.horizon,
            "timestep": self.timestep,
            "seed": self.seed,
            "environment": {"gravity": self.env.g.tolist(), "thrust_axis": self.env.e_T.tolist()},
            "geometry": {
                "radius": self.radius,
                "period": self.period,
                "climb_rate": self.climb_rate,
                "center": self.center.tolist(),
            },
            "initial_error": {"xi": self.xi0.tolist()},
            "gains": {
                "k_p": self.gains.K_p.tolist(),
                "k_v": self.gains.K_v.tolist(),
                "k_r": self.gains.K_r.tolist(),
            },
            "t_max": self.t_max,
            "disturbance": [
                {"start": w.start, "end": w.end, "g_tilde": w.g_tilde.tolist()}
                for w in self.disturbance
            ],
        }


def _require(cond: bool, name: str, msg: str):
    if not cond:
        raise ScenarioError(f"{name}: {msg}")


def _vec3(raw, name: str) -> np.ndarray:
    try:
        v = np.asarray(raw, dtype=float).reshape(3)
    except Exception as exc:
        raise ScenarioError(f"{name}: expected a 3-vector, got {raw!r}") from exc
    _require(bool(np.isfinite(v).all()), name, "components must be finite")
    return v


def _gain_matrix(raw, name: str) -> np.ndarray:
    if isinstance(raw, (int, float)):
        _require(raw > 0, name, f"scalar gain must be positive, got {raw}")
        return float(raw) * np.eye(3)
    try:
        K = np.asarray(raw, dtype=float).reshape(3, 3)
    except Exception as exc:
        raise ScenarioError(f"{name}: expected a scalar or 3x3 matrix") from exc
    _require(np.abs(K - K.T).max() <= 1e-12, name, "matrix must be symmetric")
    _require(float(np.linalg.eigvalsh(K).min()) > 0.0, name, "matrix must be positive definite")
    return K


def scenario_from_dict(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ScenarioError("document: expected a mapping at top level")
    kind = raw.get("scenario")
    _require(kind in ("hover", "circle", "helix"), "scenario", f"must be hover|circle|helix, got {kind!r}")

    horizon = raw.get("horizon", 10.0)
    _require(isinstance(horizon, (int, float)) and horizon > 0, "horizon", "must be positive")
    timestep = raw.get("timestep", 1e-3)
    _require(isinstance(timestep, (int, float)) and timestep > 0, "timestep", "must be positive")
    seed = raw.get("seed", 0)
    _require(isinstance(seed, int), "seed", "must be an integer")

    env_raw = raw.get("environment", {})
    g = _vec3(env_raw.get("gravity", [0.0, 0.0, -9.81]), "environment.gravity")
    e_T = _vec3(env_raw.get("thrust_axis", [0.0, 0.0, 1.0]), "environment.thrust_axis")
    _require(
        abs(float(np.linalg.norm(e_T)) - 1.0) <= 1e-9,
        "environment.thrust_axis",
        f"must be unit within 1e-9, |e_T| = {float(np.linalg.norm(e_T))!r}",
    )
    env = Environment(g=g, e_T=e_T)

    gains_raw = raw.get("gains", {})
    try:
        gains = Gains(
            _gain_matrix(gains_raw.get("k_p", 1.0), "gains.k_p"),
            _gain_matrix(gains_raw.get("k_v", 1.0), "gains.k_v"),
            _gain_matrix(gains_raw.get("k_r", 60.0), "gains.k_r"),
        )
    except ValueError as exc:
        raise ScenarioError(f"gains: {exc}") from exc

    init = raw.get("initial_error", {})
    if "xi" in init:
        try:
            xi0 = np.asarray(init["xi"], dtype=float).reshape(9)
        except Exception as exc:
            raise ScenarioError("initial_error.xi: expected 9 numbers") from exc
        _require(bool(np.isfinite(xi0).all()), "initial_error.xi", "must be finite")
    else:
        rot = _vec3(init.get("rotation", [0, 0, 0]), "initial_error.rotation")
        vel = _vec3(init.get("velocity", [0, 0, 0]), "initial_error.velocity")
        pos = _vec3(init.get("position", [0, 0, 0]), "initial_error.position")
        from .se23_group import log_se23

        xi0 = log_se23(GroupElement(exp_so3(rot), vel, pos))

    geom = raw.get("geometry", {})
    radius = float(geom.get("radius", 1.0))
    period = float(geom.get("period", 8.0))
    climb = float(geom.get("climb_rate", 0.0))
    center = _vec3(geom.get("center", [0, 0, 0]), "geometry.center")
    if kind in ("circle", "helix"):
        _require(radius > 0, "geometry.radius", "must be positive")
        _require(period > 0, "geometry.period", "must be positive")

    t_max = raw.get("t_max")
    if t_max is not None:
        _require(isinstance(t_max, (int, float)) and t_max > 0, "t_max", "must be positive")

    windows = []
    for i, w in enumerate(raw.get("disturbance", []) or []):
        name = f"disturbance[{i}]"
        _require(isinstance(w, dict), name, "expected a mapping")
        start, end = w.get("start"), w.get("end")
        _require(isinstance(start, (int, float)) and isinstance(end, (int, float)) and 0 <= start < end,
                 name, "needs numeric 0 <= start < end")
        windows.append(DisturbanceWindow(float(start), float(end), _vec3(w.get("g_tilde"), f"{name}.g_tilde")))

    cfg = ScenarioConfig(
        kind=kind,
        horizon=float(horizon),
        timestep=float(timestep),
        env=env,
        gains=gains,
        xi0=xi0,
        seed=seed,
        radius=radius,
        period=period,
        climb_rate=climb,
        center=center,
        t_max=None if t_max is None else float(t_max),
        disturbance=tuple(windows),
    )
    cfg.build_reference()  # validates geometry/environment compatibility
    return cfg


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise ScenarioError(f"file: {path} does not exist")
    with open(path) as f:
        try:
            raw = yaml.safe_load(f)
        except yaml.YAMLError as exc:
            raise ScenarioError(f"file: YAML parse error: {exc}") from exc
    return scenario_from_dict(raw)


@dataclass
class TrajectoryLog:
    t: np.ndarray  # (n,)
    xi: np.ndarray  # (n, 9)
    errors: np.ndarray  # (n, 9): e_p, e_v, e_r
    thrust: np.ndarray  # (n,)
    omega: np.ndarray  # (n, 3)
    V: np.ndarray  # (n,)
    v_bound: np.ndarray  # (n,); NaN when the envelope is not applicable
    residuals: np.ndarray  # (n, 3): position/velocity/attitude law residuals
    saturated: np.ndarray  # (n,) bool
    p: np.ndarray  # (n, 3) actual position
    p_bar: np.ndarray  # (n, 3) reference position
    report: StabilityReport | None = None
    config: ScenarioConfig | None = None

    @staticmethod
    def empty() -> "TrajectoryLog":
        return TrajectoryLog(
            t=np.empty(0),
            xi=np.empty((0, 9)),
            errors=np.empty((0, 9)),
            thrust=np.empty(0),
            omega=np.empty((0, 3)),
            V=np.empty(0),
            v_bound=np.empty(0),
            residuals=np.empty((0, 3)),
            saturated=np.empty(0, dtype=bool),
            p=np.empty((0, 3)),
            p_bar=np.empty((0, 3)),
        )

    def matrix(self) -> np.ndarray:
        """Samples in the documented 25-column order."""
        return np.column_stack(
            [
                self.t,
                self.xi,
                self.errors,
                self.thrust,
                self.omega,
                self.V,
                self.v_bound,
            ]
        )


class SimulationAborted(RuntimeError):
    def __init__(self, step_index: int, t: float, xi: np.ndarray | None, cause: Exception):
        self.step_index = step_index
        self.t = t
        self.xi = xi
        super().__init__(f"aborted at step {step_index} (t = {t:g}): {cause}; xi = {xi}")


def run_closed_loop(cfg: ScenarioConfig) -> TrajectoryLog:
    """Simulate the controlled system; deterministic given the config."""
    traj = cfg.build_reference()
    ref0 = traj.sample(0.0)
    report = gain_condition_check(cfg.gains, ref0.T_bar)

    X = compose(ref0.Xbar, exp_se23(cfg.xi0))
    n = int(round(cfg.horizon / cfg.timestep))
    h = cfg.timestep
    envelope_ok = report.condition_holds and not cfg.disturbance

    log = TrajectoryLog(
        t=np.empty(n + 1),
        xi=np.empty((n + 1, 9)),
        errors=np.empty((n + 1, 9)),
        thrust=np.empty(n + 1),
        omega=np.empty((n + 1, 3)),
        V=np.empty(n + 1),
        v_bound=np.empty(n + 1),
        residuals=np.empty((n + 1, 3)),
        saturated=np.empty(n + 1, dtype=bool),
        p=np.empty((n + 1, 3)),
        p_bar=np.empty((n + 1, 3)),
        report=report,
        config=cfg,
    )

    state = ControllerState()
    V0 = math.nan
    for k in range(n + 1):
        t = k * h
        base = traj.sample(t)
        g_til = cfg.g_tilde_at(t)
        ref = ReferenceSample(base.Xbar, base.T_bar, base.omega_bar, g_til)
        try:
            xi = error_state(ref.Xbar, X)
        except PrincipalBranchError as exc:
            raise SimulationAborted(k, t, None, exc) from exc
        try:
            u, state, diag = control_step(xi, ref, cfg.env, cfg.gains, state, h, cfg.t_max)
        except ControllerError as exc:
            raise SimulationAborted(k, t, xi, exc) from exc
        if k == 0:
            V0 = diag.V
        log.t[k] = t
        log.xi[k] = xi
        log.errors[k, 0:3] = diag.errors.e_p
        log.errors[k, 3:6] = diag.errors.e_v
        log.errors[k, 6:9] = diag.errors.e_r
        log.thrust[k] = u.T
        log.omega[k] = u.omega
        log.V[k] = diag.V
        log.v_bound[k] = (
            V0 * math.exp(-2.0 * report.alpha * t) if envelope_ok else math.nan
        )
        log.residuals[k] = (diag.residual_position, diag.residual_velocity, diag.residual_attitude)
        log.saturated[k] = diag.saturated
        log.p[k] = X.p
        log.p_bar[k] = ref.Xbar.p
        if k < n:
            plant_env = Environment(g=cfg.env.g - g_til, e_T=cfg.env.e_T) if g_til.any() else cfg.env
            X = step(X, u, plant_env, h)
    return log


def _format_row(row) -> str:
    return ",".join(f"{x:.17g}" for x in row)


def write_log(log: TrajectoryLog, path) -> None:
    """Write the 25-column CSV and the JSON sidecar <path>.meta.json."""
    path = Path(path)
    lines = [",".join(CSV_COLUMNS)]
    for row in log.matrix():
        lines.append(_format_row(row))
    path.write_text("\n".join(lines) + "\n")

    meta = {
        "columns": CSV_COLUMNS,
        "float_format": "%.17g",
        "scenario": log.config.as_dict() if log.config is not None else None,
        "stability": log.report.as_dict() if log.report is not None else None,
    }
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def write_states(log: TrajectoryLog, path) -> None:
    """Companion CSV with absolute actual/reference positions (for 3-D plots)."""
    path = Path(path)
    lines = [",".join(STATES_COLUMNS)]
    for k in range(log.t.size):
        lines.append(_format_row(np.concatenate([[log.t[k]], log.p[k], log.p_bar[k]])))
    path.write_text("\n".join(lines) + "\n")


def read_log(path) -> tuple[list[str], np.ndarray]:
    """Parse a log CSV; returns (column names, (n, 25) data)."""
    path = Path(path)
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    if header != CSV_COLUMNS:
        raise ValueError(f"log schema mismatch: expected {CSV_COLUMNS}, got {header}")
    if len(lines) == 1:
        return header, np.empty((0, len(header)))
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, data


def default_output_dir() -> Path:
    return Path(os.environ.get(ENV_OUT_DIR, "."))
