"""Experiment harness: measurement-interval scans, agent training, transfer.

Three workflows, mirroring the three figures the package reproduces:

* ``run_simulate``: an ensemble of weakly monitored trajectories under a fixed
  flip pulse (or a trained policy), with the measurement-free reference and
  ensemble averages.
* ``run_train`` / ``run_evaluate``: PPO training against a noise preset and
  deterministic-mean-policy evaluation.
* ``run_transfer``: continue training a loaded agent in the hybrid-noise
  environment and compare fidelities before and after.

All randomness flows from a single master seed through named SeedSequence
streams, so every artifact is replayable bit-for-bit from its manifest.
"""

from __future__ import annotations

import math
import os
import time
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from ._version import __version__
from .core import RHO_GROUND, SIGMA_X, SIGMA_Y, SIGMA_Z, expectation
from .dynamics import (
    NOISE_PRESETS,
    OMEGA_FLIP,
    OMEGA_MAX,
    DriveSpec,
    NoiseModel,
    evolve_interval,
)
from .env import EnvConfig, EpisodeLog, QubitFlipEnv, compose_state
from .errors import ConfigError
from .measurement import make_gaussian_pointer, sample_and_collapse
from .ppo import (
    AdamState,
    MlpParams,
    PpoHyper,
    TransitionBatch,
    forward,
    gaussian_log_prob,
    init_params,
    load_checkpoint,
    ppo_update,
    save_checkpoint,
)
from .runio import export_csv, write_json_atomic

# Named random streams: every consumer derives its generator from
# SeedSequence([master_seed, stream, index]), a fixed integer mixing function,
# so trajectory order never matters and no stream aliases another.
STREAM_INIT = 0
STREAM_EPISODE_ENV = 1
STREAM_EPISODE_AGENT = 2
STREAM_EVAL_ENV = 3
STREAM_SIM_TRAJ = 4
STREAM_STOP_EVAL = 5

#: Mean-fidelity bars each preset's agent is expected to clear on evaluation.
PRESET_TARGETS = {
    "detuning": 0.97,
    "dephasing": 0.97,
    "relaxation": 0.90,
    "hybrid": 0.92,
}

LEARNING_CURVE_COLUMNS = ("episode", "total_reward", "final_fidelity", "steps")
AVERAGES_COLUMNS = (
    "step", "t", "exp_y_mean", "exp_y_se", "exp_z_mean", "exp_z_se",
    "q0_mean", "q0_se",
)


def seed_for(master_seed: int, stream: int, index: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(master_seed), int(stream), int(index)])


def env_config_for_preset(preset: str, **overrides) -> EnvConfig:
    """EnvConfig for a named noise preset.

    The relaxation and hybrid presets require four consecutive above-threshold
    steps before the success bonus; the others terminate on the first.
    """
    if preset not in NOISE_PRESETS:
        raise ConfigError(
            f"unknown noise preset {preset!r}; choose from {sorted(NOISE_PRESETS)}"
        )
    fields = {
        "noise": NOISE_PRESETS[preset],
        "consecutive_success_required": 4 if preset in ("relaxation", "hybrid") else 1,
    }
    fields.update(overrides)
    try:
        return EnvConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


# ------------------------------------------------------------------
# Config documents (JSON file <-> dataclasses)
# ------------------------------------------------------------------

def _env_config_from_doc(doc: dict) -> EnvConfig:
    doc = dict(doc)
    noise_doc = doc.pop("noise", None)
    try:
        if noise_doc is not None:
            doc["noise"] = NoiseModel(**noise_doc)
        return EnvConfig(**doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad environment config: {exc}") from exc


def _hyper_from_doc(doc: dict) -> PpoHyper:
    try:
        return PpoHyper(**doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad PPO config: {exc}") from exc


def resolve_run_config(
    preset: str | None = None,
    config_doc: dict | None = None,
    env_overrides: dict | None = None,
    ppo_overrides: dict | None = None,
) -> tuple[str | None, EnvConfig, PpoHyper, dict]:
    """Merge preset defaults, a config document, and flag overrides.

    Precedence, lowest to highest: preset defaults, the config file's ``env``
    and ``ppo`` sections, explicit overrides.  Returns the resolved pieces and
    the fully resolved document that goes into the run manifest.
    """
    config_doc = dict(config_doc or {})
    unknown = set(config_doc) - {"preset", "env", "ppo"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    preset = preset or config_doc.get("preset")

    if preset is not None:
        env_doc = asdict(env_config_for_preset(preset))
    else:
        env_doc = asdict(EnvConfig())
    for layer in (config_doc.get("env") or {}, env_overrides or {}):
        for key, value in layer.items():
            if key == "noise" and isinstance(value, dict):
                env_doc.setdefault("noise", {}).update(value)
            else:
                env_doc[key] = value
    env_config = _env_config_from_doc(env_doc)

    ppo_doc = asdict(PpoHyper())
    for layer in (config_doc.get("ppo") or {}, ppo_overrides or {}):
        ppo_doc.update(layer)
    hyper = _hyper_from_doc(ppo_doc)

    resolved = {"preset": preset, "env": asdict(env_config), "ppo": asdict(hyper)}
    return preset, env_config, hyper, resolved


# ------------------------------------------------------------------
# Result containers
# ------------------------------------------------------------------

@dataclass
class FidelityStats:
    """Summary of terminal fidelities against |1><1| over an evaluation set."""

    episode_count: int
    mean: float
    std: float
    min: float
    max: float
    values: list[float]

    @classmethod
    def from_values(cls, values) -> "FidelityStats":
        arr = np.asarray(list(values), dtype=float)
        if arr.size == 0:
            raise ValueError("need at least one fidelity value")
        return cls(
            episode_count=int(arr.size),
            mean=float(arr.mean()),
            std=float(arr.std()),
            min=float(arr.min()),
            max=float(arr.max()),
            values=[float(v) for v in arr],
        )

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunManifest:
    """Everything needed to replay a run: command, resolved config, seed,
    artifact paths, wall-clock timings, software version."""

    command: str
    config: dict
    master_seed: int
    artifacts: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def write(self, path) -> None:
        write_json_atomic(asdict(self), path)


# ------------------------------------------------------------------
# Episode collection
# ------------------------------------------------------------------

def collect_episode(
    env: QubitFlipEnv,
    params: MlpParams,
    rng_agent: np.random.Generator | None,
    deterministic: bool = False,
):
    """Roll one episode; returns (transition dict, EpisodeLog, total reward).

    In stochastic mode the pre-clip Gaussian draw is stored as the action so
    the stored log-probability is exactly the density the updater recomputes.
    Deterministic mode plays the policy mean and draws nothing from the agent
    stream (the environment's own action noise still applies).
    """
    obs = env.reset().as_array()
    log_std = float(params.log_std)
    std = math.exp(log_std)
    states, actions, log_probs, rewards, values, dones = [], [], [], [], [], []
    total = 0.0
    while True:
        mean, value = forward(params, obs)
        if deterministic:
            raw = mean
        else:
            raw = mean + std * rng_agent.standard_normal()
        log_prob = float(gaussian_log_prob(mean, log_std, raw))
        result = env.step(float(np.clip(raw, 0.0, 1.0)))
        states.append(obs)
        actions.append(raw)
        log_probs.append(log_prob)
        values.append(value)
        rewards.append(result.reward)
        dones.append(result.done)
        total += result.reward
        obs = result.state.as_array()
        if result.done:
            break
    episode = {
        "states": np.array(states),
        "actions": np.array(actions),
        "log_probs": np.array(log_probs),
        "rewards": np.array(rewards),
        "values": np.array(values),
        "dones": np.array(dones, dtype=bool),
    }
    return episode, env.log, total


def evaluate(
    params: MlpParams,
    config: EnvConfig,
    episodes: int,
    master_seed: int,
    stream: int = STREAM_EVAL_ENV,
) -> tuple[FidelityStats, list[EpisodeLog]]:
    """Deterministic-mean-policy evaluation over independent episodes."""
    logs, fids = [], []
    for i in range(episodes):
        env = QubitFlipEnv(config, seed=seed_for(master_seed, stream, i))
        _, log, _ = collect_episode(env, params, None, deterministic=True)
        logs.append(log)
        fids.append(log.terminal_fidelity)
    return FidelityStats.from_values(fids), logs


# ------------------------------------------------------------------
# Training
# ------------------------------------------------------------------

@dataclass
class TrainResult:
    params: MlpParams
    adam: AdamState
    curve: list[tuple]
    episodes_run: int
    first_sustained: int | None
    stopped_early: bool


def train_agent(
    config: EnvConfig,
    hyper: PpoHyper,
    master_seed: int,
    max_episodes: int,
    params: MlpParams | None = None,
    adam: AdamState | None = None,
    target: float | None = None,
    early_stop: bool = False,
    stop_eval_episodes: int = 20,
    stop_margin: float = 0.005,
    episode_offset: int = 0,
    log_every: int | None = None,
) -> TrainResult:
    """PPO training loop with batched updates and optional early stopping.

    Episode i draws its environment stream from (seed, STREAM_EPISODE_ENV, i)
    and its exploration stream from (seed, STREAM_EPISODE_AGENT, i), so runs
    are reproducible regardless of batching.  ``first_sustained`` records the
    episode at which the 10-episode moving mean of terminal fidelity first
    exceeds ``target``.  With ``early_stop``, once that has happened a short
    deterministic evaluation runs every ``hyper.eval_interval`` episodes and
    training stops when its mean clears ``target + stop_margin``.

    ``episode_offset`` shifts the seed-stream indices (and curve numbering) so
    a fine-tune continues a run without replaying the original episodes.
    """
    if params is None:
        params = init_params(np.random.default_rng(seed_for(master_seed, STREAM_INIT)))
    curve: list[tuple] = []
    recent: deque = deque(maxlen=10)
    first_sustained = None
    episodes_run = 0
    stopped_early = False
    next_stop_check = hyper.eval_interval
    while episodes_run < max_episodes:
        batch_size = min(hyper.batch_episodes, max_episodes - episodes_run)
        episodes = []
        for j in range(batch_size):
            idx = episode_offset + episodes_run + j
            env = QubitFlipEnv(config, seed=seed_for(master_seed, STREAM_EPISODE_ENV, idx))
            rng_agent = np.random.default_rng(
                seed_for(master_seed, STREAM_EPISODE_AGENT, idx)
            )
            episode, log, total = collect_episode(env, params, rng_agent)
            episodes.append(episode)
            curve.append((idx + 1, total, log.terminal_fidelity, len(log)))
            recent.append(log.terminal_fidelity)
            if (
                first_sustained is None
                and target is not None
                and len(recent) == recent.maxlen
                and sum(recent) / len(recent) > target
            ):
                first_sustained = idx + 1
        batch = TransitionBatch.from_episodes(episodes)
        params, adam = ppo_update(params, batch, hyper, adam)
        episodes_run += batch_size
        if log_every and episodes_run % log_every < batch_size:
            tail = [row[2] for row in curve[-50:]]
            print(
                f"  episode {episode_offset + episodes_run}: "
                f"mean fidelity (last 50) = {np.mean(tail):.4f}",
                flush=True,
            )
        if (
            early_stop
            and target is not None
            and first_sustained is not None
            and episodes_run >= next_stop_check
        ):
            next_stop_check = episodes_run + hyper.eval_interval
            stats, _ = evaluate(
                params, config, stop_eval_episodes, master_seed, stream=STREAM_STOP_EVAL
            )
            if stats.mean >= target + stop_margin:
                stopped_early = True
                break
    return TrainResult(
        params=params,
        adam=adam,
        curve=curve,
        episodes_run=episodes_run,
        first_sustained=first_sustained,
        stopped_early=stopped_early,
    )


# ------------------------------------------------------------------
# Ensemble simulation (measurement-interval scan)
# ------------------------------------------------------------------

@dataclass
class EnsembleResult:
    n_steps: int
    dt: float
    trajectories: list[EpisodeLog]
    reference: EpisodeLog
    averages: dict


def _steps_for_ratio(dt_ratio: float, total_time: float = 1.0) -> int:
    if dt_ratio <= 0:
        raise ConfigError(f"dt_ratio must be positive, got {dt_ratio}")
    n = round(total_time / dt_ratio)
    if n < 1 or abs(n * dt_ratio - total_time) > 1e-9:
        raise ConfigError(
            f"dt_ratio {dt_ratio} does not divide the total time {total_time}"
        )
    return n


def _simulate_trajectory(
    n_steps: int,
    dt: float,
    sigma: float,
    noise: NoiseModel,
    rng: np.random.Generator | None,
    policy: MlpParams | None,
    substeps: int = 10,
) -> EpisodeLog:
    """One monitored (or reference, rng=None) trajectory from |0><0|.

    Under ``policy`` the deterministic mean drives each interval; otherwise a
    constant resonant flip pulse.  No reward shaping: every trajectory runs
    the full duration.
    """
    pointer = make_gaussian_pointer(sigma)
    rho = RHO_GROUND.copy()
    log = EpisodeLog()
    last_action = 0.0
    obs = None
    if policy is not None:
        obs = compose_state(last_action, 0, 0, rho, n_steps).as_array()
    for i in range(n_steps):
        if policy is not None:
            mean, _ = forward(policy, obs)
            action_norm = mean
            omega = action_norm * OMEGA_MAX
        else:
            omega = OMEGA_FLIP
            action_norm = omega / OMEGA_MAX
        rho = evolve_interval(rho, DriveSpec(omega), noise, dt, substeps)
        if rng is not None:
            outcome = sample_and_collapse(rho, pointer, rng)
            rho = outcome.posterior
            q0 = outcome.q0
        else:
            q0 = 0
        fid = float(abs(rho[1, 1]))
        log.append(
            i + 1, (i + 1) * dt, action_norm, omega, q0,
            expectation(rho, SIGMA_X),
            expectation(rho, SIGMA_Y), expectation(rho, SIGMA_Z),
            float(rho[0, 0].real), float(rho[1, 1].real), 0.0, fid,
        )
        if policy is not None:
            obs = compose_state(action_norm, q0, i + 1, rho, n_steps).as_array()
    log.terminal_fidelity = log.fidelities[-1]
    return log


def run_ensemble(
    dt_ratio: float,
    ensemble: int,
    sigma: float,
    master_seed: int,
    policy: MlpParams | None = None,
    noise: NoiseModel = NoiseModel(),
    total_time: float = 1.0,
    substeps: int = 10,
) -> EnsembleResult:
    """Independent monitored trajectories plus the measurement-free reference.

    ``averages`` holds per-step ensemble means and standard errors of <Y>,
    <Z> and the pointer outcome q0.
    """
    if ensemble < 1:
        raise ConfigError(f"ensemble size must be >= 1, got {ensemble}")
    n_steps = _steps_for_ratio(dt_ratio, total_time)
    dt = total_time / n_steps
    trajectories = []
    for k in range(ensemble):
        rng = np.random.default_rng(seed_for(master_seed, STREAM_SIM_TRAJ, k))
        trajectories.append(
            _simulate_trajectory(n_steps, dt, sigma, noise, rng, policy, substeps)
        )
    reference = _simulate_trajectory(n_steps, dt, sigma, noise, None, policy, substeps)

    ys = np.array([t.exp_y for t in trajectories])
    zs = np.array([t.exp_z for t in trajectories])
    qs = np.array([t.q0s for t in trajectories], dtype=float)
    ddof = 1 if ensemble > 1 else 0
    root_n = math.sqrt(ensemble)
    averages = {
        "step": np.arange(1, n_steps + 1),
        "t": (np.arange(1, n_steps + 1)) * dt,
        "exp_y_mean": ys.mean(axis=0),
        "exp_y_se": ys.std(axis=0, ddof=ddof) / root_n,
        "exp_z_mean": zs.mean(axis=0),
        "exp_z_se": zs.std(axis=0, ddof=ddof) / root_n,
        "q0_mean": qs.mean(axis=0),
        "q0_se": qs.std(axis=0, ddof=ddof) / root_n,
    }
    return EnsembleResult(
        n_steps=n_steps, dt=dt, trajectories=trajectories,
        reference=reference, averages=averages,
    )


# ------------------------------------------------------------------
# File-writing workflows (shared by the CLI and the demo scripts)
# ------------------------------------------------------------------

def _averages_rows(averages: dict):
    n = len(averages["step"])
    for i in range(n):
        yield (
            int(averages["step"][i]), float(averages["t"][i]),
            float(averages["exp_y_mean"][i]), float(averages["exp_y_se"][i]),
            float(averages["exp_z_mean"][i]), float(averages["exp_z_se"][i]),
            float(averages["q0_mean"][i]), float(averages["q0_se"][i]),
        )


def run_simulate(
    dt_ratio: float,
    ensemble: int,
    sigma: float,
    master_seed: int,
    out_dir,
    checkpoint_path=None,
) -> tuple[EnsembleResult, RunManifest]:
    """The measurement-interval scan command: trajectories + averages as CSV."""
    t0 = time.perf_counter()
    policy = None
    if checkpoint_path is not None:
        policy, _, _ = load_checkpoint(checkpoint_path)
    result = run_ensemble(dt_ratio, ensemble, sigma, master_seed, policy=policy)
    os.makedirs(out_dir, exist_ok=True)
    artifacts = {}
    for k, log in enumerate(result.trajectories):
        path = os.path.join(out_dir, f"trajectory_{k:03d}.csv")
        export_csv(log, path)
        artifacts[f"trajectory_{k:03d}"] = path
    ref_path = os.path.join(out_dir, "reference.csv")
    export_csv(result.reference, ref_path)
    artifacts["reference"] = ref_path
    avg_path = os.path.join(out_dir, "averages.csv")
    export_csv((AVERAGES_COLUMNS, _averages_rows(result.averages)), avg_path)
    artifacts["averages"] = avg_path
    manifest = RunManifest(
        command="simulate",
        config={
            "dt_ratio": dt_ratio,
            "ensemble": ensemble,
            "sigma": sigma,
            "checkpoint": None if checkpoint_path is None else os.fspath(checkpoint_path),
        },
        master_seed=master_seed,
        artifacts=artifacts,
        timings={"total_s": time.perf_counter() - t0},
    )
    manifest.write(os.path.join(out_dir, "manifest.json"))
    return result, manifest


def run_train(
    preset: str,
    episodes: int,
    master_seed: int,
    out_dir,
    config_doc: dict | None = None,
    early_stop: bool = True,
    eval_episodes: int = 100,
    log_every: int | None = None,
) -> tuple[TrainResult, FidelityStats, RunManifest]:
    """Train an agent for a preset; writes checkpoint, curve, stats, manifest."""
    preset, env_config, hyper, resolved = resolve_run_config(preset, config_doc)
    target = PRESET_TARGETS[preset]
    t0 = time.perf_counter()
    result = train_agent(
        env_config, hyper, master_seed, episodes,
        target=target, early_stop=early_stop, log_every=log_every,
    )
    train_s = time.perf_counter() - t0
    stats, _ = evaluate(result.params, env_config, eval_episodes, master_seed)
    os.makedirs(out_dir, exist_ok=True)
    ckpt_path = os.path.join(out_dir, "checkpoint.json")
    save_checkpoint(
        result.params, hyper,
        {
            "preset": preset,
            "master_seed": master_seed,
            "episodes_run": result.episodes_run,
            "first_sustained": result.first_sustained,
            "eval_mean_fidelity": stats.mean,
        },
        ckpt_path,
    )
    curve_path = os.path.join(out_dir, "learning_curve.csv")
    export_csv((LEARNING_CURVE_COLUMNS, result.curve), curve_path)
    stats_path = os.path.join(out_dir, "eval_stats.json")
    write_json_atomic(stats.to_dict(), stats_path)
    manifest = RunManifest(
        command="train",
        config={**resolved, "episodes": episodes, "early_stop": early_stop,
                "eval_episodes": eval_episodes},
        master_seed=master_seed,
        artifacts={
            "checkpoint": ckpt_path,
            "learning_curve": curve_path,
            "eval_stats": stats_path,
        },
        timings={
            "train_s": train_s,
            "total_s": time.perf_counter() - t0,
        },
    )
    manifest.write(os.path.join(out_dir, "manifest.json"))
    return result, stats, manifest


def run_evaluate(
    checkpoint_path,
    preset: str,
    episodes: int,
    master_seed: int,
    out_dir,
    max_trajectory_files: int = 10,
) -> tuple[FidelityStats, RunManifest]:
    """Evaluate a checkpoint with the deterministic mean policy."""
    params, _, _ = load_checkpoint(checkpoint_path)
    env_config = env_config_for_preset(preset)
    t0 = time.perf_counter()
    stats, logs = evaluate(params, env_config, episodes, master_seed)
    os.makedirs(out_dir, exist_ok=True)
    artifacts = {}
    for k, log in enumerate(logs[:max_trajectory_files]):
        path = os.path.join(out_dir, f"eval_trajectory_{k:03d}.csv")
        export_csv(log, path)
        artifacts[f"eval_trajectory_{k:03d}"] = path
    stats_path = os.path.join(out_dir, "eval_stats.json")
    write_json_atomic(stats.to_dict(), stats_path)
    artifacts["eval_stats"] = stats_path
    manifest = RunManifest(
        command="evaluate",
        config={
            "checkpoint": os.fspath(checkpoint_path),
            "preset": preset,
            "episodes": episodes,
            "env": asdict(env_config),
        },
        master_seed=master_seed,
        artifacts=artifacts,
        timings={"total_s": time.perf_counter() - t0},
    )
    manifest.write(os.path.join(out_dir, "manifest.json"))
    return stats, manifest


@dataclass
class TransferResult:
    home_stats: FidelityStats | None
    pre_stats: FidelityStats
    post_stats: FidelityStats
    train: TrainResult


def run_transfer(
    checkpoint_path,
    episodes: int,
    master_seed: int,
    out_dir,
    eval_episodes: int = 100,
    early_stop: bool = True,
    log_every: int | None = None,
) -> tuple[TransferResult, RunManifest]:
    """Fine-tune a trained agent in the hybrid environment.

    Reports fidelity in the agent's home preset (when the checkpoint records
    one), in the hybrid environment before fine-tuning, and after.  The Adam
    optimizer restarts fresh; only network weights carry over.
    """
    params, hyper, meta = load_checkpoint(checkpoint_path)
    hybrid_config = env_config_for_preset("hybrid")
    target = PRESET_TARGETS["hybrid"]
    t0 = time.perf_counter()
    home_stats = None
    home_preset = meta.get("preset")
    if home_preset in NOISE_PRESETS and home_preset != "hybrid":
        home_stats, _ = evaluate(
            params, env_config_for_preset(home_preset), eval_episodes, master_seed
        )
    pre_stats, _ = evaluate(params, hybrid_config, eval_episodes, master_seed)
    offset = int(meta.get("episodes_run") or 0)
    train_result = train_agent(
        hybrid_config, hyper, master_seed, episodes,
        params=params.copy(), target=target, early_stop=early_stop,
        episode_offset=offset, log_every=log_every,
    )
    post_stats, _ = evaluate(
        train_result.params, hybrid_config, eval_episodes, master_seed
    )
    os.makedirs(out_dir, exist_ok=True)
    ckpt_path = os.path.join(out_dir, "checkpoint.json")
    save_checkpoint(
        train_result.params, hyper,
        {
            "preset": "hybrid",
            "master_seed": master_seed,
            "episodes_run": offset + train_result.episodes_run,
            "first_sustained": train_result.first_sustained,
            "fine_tuned_from": os.fspath(checkpoint_path),
            "eval_mean_fidelity": post_stats.mean,
        },
        ckpt_path,
    )
    curve_path = os.path.join(out_dir, "learning_curve.csv")
    export_csv((LEARNING_CURVE_COLUMNS, train_result.curve), curve_path)
    stats_doc = {
        "home": None if home_stats is None else home_stats.to_dict(),
        "pre_transfer": pre_stats.to_dict(),
        "post_transfer": post_stats.to_dict(),
    }
    stats_path = os.path.join(out_dir, "transfer_stats.json")
    write_json_atomic(stats_doc, stats_path)
    manifest = RunManifest(
        command="transfer",
        config={
            "checkpoint": os.fspath(checkpoint_path),
            "episodes": episodes,
            "eval_episodes": eval_episodes,
            "early_stop": early_stop,
            "env": asdict(hybrid_config),
            "ppo": asdict(hyper),
        },
        master_seed=master_seed,
        artifacts={
            "checkpoint": ckpt_path,
            "learning_curve": curve_path,
            "transfer_stats": stats_path,
        },
        timings={"total_s": time.perf_counter() - t0},
    )
    manifest.write(os.path.join(out_dir, "manifest.json"))
    return TransferResult(home_stats, pre_stats, post_stats, train_result), manifest
