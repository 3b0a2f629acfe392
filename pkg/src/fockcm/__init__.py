"""Fock-state preparation in a lossless cavity by conditional measurement of
sequential two-level atoms with random interaction times."""

from ._core import BACKEND
from .dynamics import (
    CmResult,
    CouplingParams,
    approx_cm_factor,
    cm_step,
    critical_spread,
    excited_cm_step,
    isolated_trapping_time,
    jc_joint_evolve,
    kraus_operators,
    nsm_step,
    project_atom,
    trapping_times,
)
from .errors import (
    FockCMError,
    InvalidConfig,
    InvalidModel,
    NullOutcome,
    NumericalFault,
    ParseError,
    TruncationTooSmall,
    ValidationError,
)
from .experiment import (
    Correlation,
    EnsembleSummary,
    ExperimentConfig,
    Scheme,
    Selection,
    StepRecord,
    TrajectoryResult,
    compare_nsm,
    convergence_detector,
    resolve_target_pulse,
    run_ensemble,
    run_trajectory,
)
from .states import (
    EXCITED,
    GROUND,
    AtomState,
    FieldDensity,
    FieldState,
    JointState,
    PulseParams,
    coherent_state,
    default_n_max,
    delta_n,
    fock_state,
    mean_n,
    pn,
    prepare_atom,
    var_n,
)
from .stochastic import (
    Distribution,
    InteractionSample,
    TimingModel,
    sample_times,
    trajectory_rng,
    uncorrelated_sample_times,
)

__version__ = "0.1.0"
