"""geomgate: pulse-level simulation and synthesis of geometric quantum gates.

The package builds closed-loop drive programs for a driven two-level
system, recasts them with an exact counterdiabatic correction so the
instantaneous eigenstates are followed at any speed, and extracts the
geometric phase that such loops imprint. Gate families built this way are
compared, on equal time budgets, against slowed adiabatic loops and a
three-level nonadiabatic holonomic gate, including conditional two-qubit
versions and robustness maps over drive and detuning miscalibration.
"""

from .errors import (
    AccuracyError,
    CapabilityError,
    ConfigError,
    CyclicityError,
    DegenerateGapError,
    GeomgateError,
    InputError,
    ParameterError,
    RangeError,
    SamplingError,
)
from .schedules import (
    ControlSample,
    HolonomicParams,
    PulseSchedule,
    Segment,
    TwoLevelParams,
    build_adiabatic_schedule,
    build_holonomic_schedule,
    build_u1_schedule,
    build_u2_schedule,
    sample,
)
from .hamiltonians import (
    EigenFrame,
    HyperfineParams,
    eigenframe,
    eigenframes,
    h0,
    h_lambda,
    h_twoqubit,
    hs,
    superadiabatic_fields,
)
from .propagator import (
    PropagatorConfig,
    Trajectory,
    convergence_check,
    evolve_state,
    evolve_unitary,
    evolve_unitary_converged,
    expm_hermitian,
)
from .phases import (
    PhaseReport,
    berry_connection,
    bloch_vector,
    effective_field,
    loop_connection_phase,
    phase_report,
    solid_angle,
    wrap_angle,
)
from .gates import (
    ErrorModel,
    GateResult,
    IdealGate,
    ideal_single,
    ideal_twoqubit,
    intrinsic_fidelity,
    realize_single,
    realize_twoqubit,
)
from .sweeps import (
    FidelityGrid,
    compare_families,
    derive_omega_sm,
    omega_sm_report,
    read_grid_csv,
    sweep2d,
    write_grid_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "GeomgateError", "ParameterError", "RangeError", "DegenerateGapError",
    "InputError", "AccuracyError", "CapabilityError", "SamplingError",
    "CyclicityError", "ConfigError",
    # schedules
    "TwoLevelParams", "HolonomicParams", "Segment", "PulseSchedule",
    "ControlSample", "build_u1_schedule", "build_u2_schedule",
    "build_adiabatic_schedule", "build_holonomic_schedule", "sample",
    # hamiltonians
    "EigenFrame", "HyperfineParams", "h0", "eigenframe", "eigenframes",
    "superadiabatic_fields", "hs", "h_lambda", "h_twoqubit",
    # propagator
    "PropagatorConfig", "Trajectory", "expm_hermitian", "evolve_state",
    "evolve_unitary", "evolve_unitary_converged", "convergence_check",
    # phases
    "PhaseReport", "wrap_angle", "bloch_vector", "solid_angle", "phase_report",
    "berry_connection", "loop_connection_phase", "effective_field",
    # gates
    "ErrorModel", "IdealGate", "GateResult", "ideal_single", "ideal_twoqubit",
    "intrinsic_fidelity", "realize_single", "realize_twoqubit",
    # sweeps
    "FidelityGrid", "derive_omega_sm", "omega_sm_report", "sweep2d",
    "compare_families", "write_grid_csv", "read_grid_csv",
]
