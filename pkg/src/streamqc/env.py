"""The stream-learning environment: pulse, Lindblad evolution, weak measurement, reward.

One episode is the |0> -> |1> flip task over total time T = 1 split into
n = 100 control intervals.  Each step applies the (noisy) commanded pulse for
one interval, performs an impulsive weak measurement of sigma_z, and scores the
post-measurement conditional state.

The observation is the 7-component vector
{last commanded action, normalized weak value, i/n, |rho11|, |rho12|, |rho21|, |rho22|}.
The observation carries the *commanded* action: the Gaussian action noise models
the apparatus' systematic amplitude error, which a physical controller cannot
see.  The applied amplitude is logged alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import RHO_GROUND, SIGMA_X, SIGMA_Y, SIGMA_Z, expectation
from .dynamics import OMEGA_MAX, DriveSpec, NoiseModel, evolve_interval
from .measurement import (
    GaussianPointer,
    make_gaussian_pointer,
    normalize_weak_value,
    sample_and_collapse,
)


@dataclass(frozen=True)
class EnvConfig:
    """Episode parameters; defaults follow the flip task's standard setup."""

    total_time: float = 1.0
    n_steps: int = 100
    omega_max: float = OMEGA_MAX
    pointer_sigma: float = 10.0
    action_noise_std: float = 0.02
    success_threshold: float = 0.99
    fail_threshold: float = 0.05
    success_bonus: float = 1000.0
    fail_penalty: float = 100.0
    consecutive_success_required: int = 1
    noise: NoiseModel = field(default_factory=NoiseModel)
    substeps: int = 10
    #: Test hook: skip the weak measurement entirely (pure Lindblad dynamics).
    measurement_enabled: bool = True

    def __post_init__(self) -> None:
        if self.n_steps < 1 or self.total_time <= 0:
            raise ValueError("need n_steps >= 1 and total_time > 0")
        if self.consecutive_success_required not in (1, 4):
            raise ValueError("consecutive_success_required must be 1 or 4")

    @property
    def dt(self) -> float:
        return self.total_time / self.n_steps


@dataclass(frozen=True)
class RLState:
    """The 7-component observation fed to the agent, all entries in [0, 1]."""

    last_action_normalized: float
    weak_value_normalized: float
    time_fraction: float
    rho11_abs: float
    rho12_abs: float
    rho21_abs: float
    rho22_abs: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [
                self.last_action_normalized,
                self.weak_value_normalized,
                self.time_fraction,
                self.rho11_abs,
                self.rho12_abs,
                self.rho21_abs,
                self.rho22_abs,
            ],
            dtype=float,
        )


#: Observation at reset: no action yet, weak value at the no-information midpoint.
INITIAL_STATE = RLState(0.0, 0.5, 0.0, 1.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class StepResult:
    state: RLState
    reward: float
    done: bool
    info: dict


@dataclass
class EpisodeLog:
    """Per-step trajectory record; serializes to the trajectory CSV schema."""

    steps: list[int] = field(default_factory=list)
    times: list[float] = field(default_factory=list)
    actions_norm: list[float] = field(default_factory=list)
    omegas: list[float] = field(default_factory=list)
    q0s: list[int] = field(default_factory=list)
    exp_x: list[float] = field(default_factory=list)
    exp_y: list[float] = field(default_factory=list)
    exp_z: list[float] = field(default_factory=list)
    rho11: list[float] = field(default_factory=list)
    rho22: list[float] = field(default_factory=list)
    rewards: list[float] = field(default_factory=list)
    fidelities: list[float] = field(default_factory=list)
    terminal_fidelity: float = 0.0

    CSV_COLUMNS = (
        "step", "t", "action_norm", "omega", "q0",
        "exp_x", "exp_y", "exp_z", "rho11", "rho22", "reward", "fidelity",
    )

    def append(self, step, t, action_norm, omega, q0, ex, ey, ez, r11, r22, reward, fid):
        self.steps.append(step)
        self.times.append(t)
        self.actions_norm.append(action_norm)
        self.omegas.append(omega)
        self.q0s.append(q0)
        self.exp_x.append(ex)
        self.exp_y.append(ey)
        self.exp_z.append(ez)
        self.rho11.append(r11)
        self.rho22.append(r22)
        self.rewards.append(reward)
        self.fidelities.append(fid)

    def rows(self):
        for i in range(len(self.steps)):
            yield (
                self.steps[i], self.times[i], self.actions_norm[i], self.omegas[i],
                self.q0s[i], self.exp_x[i], self.exp_y[i], self.exp_z[i],
                self.rho11[i], self.rho22[i], self.rewards[i], self.fidelities[i],
            )

    def __len__(self) -> int:
        return len(self.steps)


def apply_action_noise(action_norm: float, std: float, rng: np.random.Generator) -> float:
    """Add centered Gaussian amplitude error and clip back to [0, 1]."""
    if std == 0.0:
        return action_norm
    return float(np.clip(action_norm + std * rng.standard_normal(), 0.0, 1.0))


def compose_state(
    last_action_norm: float,
    q0: int,
    step_index: int,
    rho: np.ndarray,
    n_steps: int = 100,
) -> RLState:
    """Assemble the 7-component observation from the current conditional state."""
    return RLState(
        last_action_normalized=float(last_action_norm),
        weak_value_normalized=normalize_weak_value(q0),
        time_fraction=step_index / n_steps,
        rho11_abs=float(abs(rho[0, 0])),
        rho12_abs=float(abs(rho[0, 1])),
        rho21_abs=float(abs(rho[1, 0])),
        rho22_abs=float(abs(rho[1, 1])),
    )


def compute_reward(
    rho: np.ndarray, step_index: int, success_streak: int, config: EnvConfig
) -> tuple[float, bool, int]:
    """Per-step reward, termination flag, and updated success streak.

    Base reward is -|rho22 - 1|.  The one-off bonus fires the first time
    |rho22| exceeds the success threshold for the required number of
    consecutive steps, ending the episode.  Reaching the final step with
    |rho11| above the fail threshold costs the penalty; the final step ends
    the episode regardless.
    """
    rho11 = float(abs(rho[0, 0]))
    rho22 = float(abs(rho[1, 1]))
    reward = -abs(rho22 - 1.0)
    streak = success_streak + 1 if rho22 > config.success_threshold else 0
    done = False
    if streak >= config.consecutive_success_required:
        reward += config.success_bonus
        done = True
    elif step_index >= config.n_steps:
        if rho11 > config.fail_threshold:
            reward -= config.fail_penalty
        done = True
    return reward, done, streak


class QubitFlipEnv:
    """Stateful episode driver around the physics primitives.

    Instances are single-threaded and own their random stream; run one
    instance per concurrent trajectory.
    """

    def __init__(
        self,
        config: EnvConfig = EnvConfig(),
        seed: int | np.random.SeedSequence | None = None,
    ):
        self.config = config
        self.pointer: GaussianPointer = make_gaussian_pointer(config.pointer_sigma)
        self.rng = np.random.default_rng(seed)
        self.rho = RHO_GROUND.copy()
        self.step_index = 0
        self.success_streak = 0
        self.done = False
        self.log = EpisodeLog()

    def reset(self, seed: int | np.random.SeedSequence | None = None) -> RLState:
        """Return to |0><0| at t = 0; optionally reseed the random stream."""
        if seed is not None:
            self.rng = np.random.default_rng(seed)
        self.rho = RHO_GROUND.copy()
        self.step_index = 0
        self.success_streak = 0
        self.done = False
        self.log = EpisodeLog()
        return INITIAL_STATE

    def step(self, action_norm: float) -> StepResult:
        """Apply one noisy pulse interval, measure, observe, and score."""
        if self.done:
            raise RuntimeError("episode is done; call reset() before stepping again")
        if not 0.0 <= action_norm <= 1.0:
            raise ValueError(f"action must lie in [0, 1], got {action_norm}")
        cfg = self.config
        noisy = apply_action_noise(action_norm, cfg.action_noise_std, self.rng)
        omega = noisy * cfg.omega_max
        self.rho = evolve_interval(
            self.rho, DriveSpec(omega), cfg.noise, cfg.dt, cfg.substeps
        )
        if cfg.measurement_enabled:
            outcome = sample_and_collapse(self.rho, self.pointer, self.rng)
            self.rho = outcome.posterior
            q0 = outcome.q0
        else:
            q0 = 0
        self.step_index += 1
        state = compose_state(action_norm, q0, self.step_index, self.rho, cfg.n_steps)
        reward, done, self.success_streak = compute_reward(
            self.rho, self.step_index, self.success_streak, cfg
        )
        self.done = done
        fidelity = float(abs(self.rho[1, 1]))  # equals Uhlmann fidelity to |1><1|
        self.log.append(
            self.step_index, self.step_index * cfg.dt, action_norm, omega, q0,
            expectation(self.rho, SIGMA_X), expectation(self.rho, SIGMA_Y),
            expectation(self.rho, SIGMA_Z),
            float(self.rho[0, 0].real), float(self.rho[1, 1].real), reward, fidelity,
        )
        if done:
            self.log.terminal_fidelity = fidelity
        return StepResult(
            state=state,
            reward=reward,
            done=done,
            info={"fidelity": fidelity, "q0": q0, "omega_applied": omega},
        )
