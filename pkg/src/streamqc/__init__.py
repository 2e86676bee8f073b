"""streamqc: stream learning for qubit control under continuous weak measurement.

A self-contained lab for the driven-qubit flip problem: Lindblad dynamics with
detuning, dephasing and relaxation; repeated Gaussian-pointer weak measurement
of sigma_z; a reinforcement-learning environment over the measurement record;
and a from-scratch PPO agent that learns closed-loop control pulses.
"""

from ._version import __version__
from .core import (
    RHO_EXCITED,
    RHO_GROUND,
    RHO_MIXED,
    RHO_PLUS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ValidationReport,
    expectation,
    partial_trace,
    pure_state_density,
    tensor_product,
    uhlmann_fidelity,
    validate_density_matrix,
)
from .dynamics import (
    NOISE_PRESETS,
    OMEGA_FLIP,
    OMEGA_MAX,
    DriveSpec,
    NoiseModel,
    build_hamiltonian,
    collapse_operators,
    evolve_interval,
    interval_propagator,
    lindblad_rhs,
)
from .env import (
    INITIAL_STATE,
    EnvConfig,
    EpisodeLog,
    QubitFlipEnv,
    RLState,
    StepResult,
    compose_state,
    compute_reward,
)
from .errors import CheckpointError, ConfigError, NumericalInstabilityError
from .experiments import (
    PRESET_TARGETS,
    EnsembleResult,
    FidelityStats,
    RunManifest,
    TrainResult,
    TransferResult,
    collect_episode,
    env_config_for_preset,
    evaluate,
    run_ensemble,
    run_evaluate,
    run_simulate,
    run_train,
    run_transfer,
    seed_for,
    train_agent,
)
from .measurement import (
    DEFAULT_GRID,
    GaussianPointer,
    MeasurementOutcome,
    PointerGrid,
    collective_measure_oracle,
    kraus_operator,
    make_gaussian_pointer,
    nonselective_map,
    normalize_weak_value,
    outcome_distribution,
    posterior_state,
    sample_and_collapse,
)
from .ppo import (
    AdamState,
    MlpParams,
    PpoHyper,
    TransitionBatch,
    compute_gae,
    forward,
    gaussian_log_prob,
    init_params,
    load_checkpoint,
    ppo_update,
    sample_action,
    save_checkpoint,
)

__all__ = [name for name in dir() if not name.startswith("_")]
