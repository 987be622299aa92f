"""SE2(3) rigid-body control toolkit.

Lie-group machinery for SE2(3), the exact log-linear error dynamics of the
mixed-invariant rigid-body model, a log-linear backstepping controller, and
a closed-loop harness that certifies the exponential-stability envelope.
"""

from .so3_core import (
    EPS_BRANCH,
    THETA_SWITCH,
    PrincipalBranchError,
    exp_so3,
    hat,
    jl_coupling,
    jl_so3,
    jr_so3,
    log_so3,
    q_l,
    q_r,
    q_tensor,
    s_l,
    s_r,
    vee,
)
from .se23_group import (
    C_MATRIX,
    XI_P,
    XI_R,
    XI_V,
    GroupElement,
    ad_small,
    adjoint,
    c_commutator,
    compose,
    exp_se23,
    inverse,
    jl_inv_se23,
    jr_inv_se23,
    left_error,
    log_se23,
    vee9,
    wedge,
)
from .dynamics import (
    ControlInput,
    Environment,
    HelixReference,
    HoverReference,
    ReferenceSample,
    feasibility_residual,
    flow_constant,
    mixed_invariant_rhs,
    reference,
    step,
)
from .log_error_dynamics import (
    InputDeviation,
    disturbance_matrix,
    error_rhs,
    error_state,
    input_matrix,
    zero_input_matrix,
)
from .controller import (
    BacksteppingErrors,
    ControllerError,
    ControllerState,
    Gains,
    StepDiagnostics,
    attitude_law,
    control_step,
    position_law,
    velocity_solve,
)
from .stability import (
    EnvelopeResult,
    StabilityReport,
    envelope_check,
    error_system_matrix,
    gain_condition_check,
    integrate_error_system,
    lyapunov_value,
    skew_quadratic_identity_test,
)
from .harness import (
    CSV_COLUMNS,
    ScenarioConfig,
    ScenarioError,
    SimulationAborted,
    TrajectoryLog,
    load_scenario,
    read_log,
    run_closed_loop,
    scenario_from_dict,
    write_log,
    write_states,
)

__version__ = "0.1.0"
