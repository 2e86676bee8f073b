"""Proximal policy optimization with a Gaussian policy over the normalized pulse.

Actor and critic are separate fully connected networks, three hidden layers of
64 ReLU units by default, built directly on numpy with hand-derived gradients.
The actor outputs a logistic-squashed mean in (0, 1); a single learned log-std
sets the exploration width.  Updates use generalized advantage estimation and
the clipped surrogate objective, with Adam as the per-parameter adaptive step.

Everything here is deterministic given the injected random generators, which
is what makes training runs replayable bit-for-bit.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import CheckpointError, NumericalInstabilityError

OBS_DIM = 7
HIDDEN_SIZES = (64, 64, 64)
LOG_STD_INIT = math.log(0.2)

CHECKPOINT_VERSION = 1

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass
class PpoHyper:
    """Training hyperparameters; the learning rate and batch size follow the
    flip-task setup, the rest are standard clipped-PPO defaults."""

    learning_rate: float = 1e-3
    batch_episodes: int = 20
    clip_epsilon: float = 0.2
    discount: float = 0.99
    gae_lambda: float = 0.95
    update_epochs: int = 10
    value_coef: float = 0.5
    entropy_coef: float = 0.0
    max_episodes: int = 2000
    eval_interval: int = 100

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 < self.clip_epsilon < 1:
            raise ValueError("clip_epsilon must lie in (0, 1)")
        if not 0 <= self.discount <= 1 or not 0 <= self.gae_lambda <= 1:
            raise ValueError("discount and gae_lambda must lie in [0, 1]")


def _glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def _init_net(rng: np.random.Generator, sizes: tuple[int, ...]) -> list[list[np.ndarray]]:
    return [
        [_glorot_uniform(rng, sizes[i], sizes[i + 1]), np.zeros(sizes[i + 1])]
        for i in range(len(sizes) - 1)
    ]


@dataclass
class MlpParams:
    """Actor and critic weight stacks plus the shared action log-std.

    Each network is a list of [W, b] layers with W of shape (fan_in, fan_out);
    hidden layers use ReLU, the output layer is linear (the actor's output is
    squashed by the logistic function at use time).
    """

    actor: list[list[np.ndarray]]
    critic: list[list[np.ndarray]]
    log_std: np.ndarray  # 0-d array so the optimizer treats it uniformly

    def flat(self) -> list[np.ndarray]:
        """All parameter arrays in a fixed traversal order."""
        out: list[np.ndarray] = []
        for net in (self.actor, self.critic):
            for w, b in net:
                out.append(w)
                out.append(b)
        out.append(self.log_std)
        return out

    def copy(self) -> "MlpParams":
        return MlpParams(
            actor=[[w.copy(), b.copy()] for w, b in self.actor],
            critic=[[w.copy(), b.copy()] for w, b in self.critic],
            log_std=self.log_std.copy(),
        )


def init_params(
    rng: np.random.Generator,
    obs_dim: int = OBS_DIM,
    hidden_sizes: tuple[int, ...] = HIDDEN_SIZES,
) -> MlpParams:
    """Fresh Glorot-uniform networks and log_std = log(0.2)."""
    sizes = (obs_dim, *hidden_sizes, 1)
    return MlpParams(
        actor=_init_net(rng, sizes),
        critic=_init_net(rng, sizes),
        log_std=np.array(LOG_STD_INIT),
    )


def _net_forward(layers: list[list[np.ndarray]], x: np.ndarray):
    """Linear output head; returns (out, activation cache for backward)."""
    h = x
    cache = [x]
    for w, b in layers[:-1]:
        h = np.maximum(h @ w + b, 0.0)
        cache.append(h)
    w, b = layers[-1]
    out = h @ w + b
    return out[..., 0], cache


def _net_backward(layers, cache, dout: np.ndarray) -> list[np.ndarray]:
    """Gradients of all layer parameters given d(loss)/d(output)."""
    grads: list[np.ndarray] = []
    dz = dout[:, None]
    for k in range(len(layers) - 1, -1, -1):
        h_in = cache[k]
        grads.append(dz.sum(axis=0))          # db
        grads.append(h_in.T @ dz)             # dW
        if k > 0:
            dh = dz @ layers[k][0].T
            dz = dh * (cache[k] > 0)          # ReLU mask: cache[k] = relu output
    grads.reverse()
    return grads


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(params: MlpParams, state: np.ndarray) -> tuple[float, float]:
    """Policy mean in (0, 1) and value estimate for a single observation."""
    x = np.asarray(state, dtype=float).reshape(1, -1)
    z, _ = _net_forward(params.actor, x)
    v, _ = _net_forward(params.critic, x)
    mean = float(_sigmoid(z)[0])
    value = float(v[0])
    if not (np.isfinite(mean) and np.isfinite(value)):
        raise NumericalInstabilityError("non-finite network output")
    return mean, value


def gaussian_log_prob(mean, log_std, action):
    """Log-density of N(mean, exp(log_std)^2) at ``action`` (no clipping correction)."""
    std = np.exp(log_std)
    return -0.5 * ((action - mean) / std) ** 2 - log_std - _LOG_SQRT_2PI


def sample_action(
    mean: float, log_std: float, rng: np.random.Generator
) -> tuple[float, float]:
    """Draw from the Gaussian policy, clip to [0, 1].

    The returned log-probability is the plain Gaussian density at the pre-clip
    draw; training code keeps the raw draw so surrogate ratios stay consistent.
    """
    raw = mean + math.exp(log_std) * rng.standard_normal()
    log_prob = float(gaussian_log_prob(mean, log_std, raw))
    return float(np.clip(raw, 0.0, 1.0)), log_prob


@dataclass
class TransitionBatch:
    """Contiguous per-episode transitions collected under one policy."""

    states: np.ndarray      # (N, obs_dim)
    actions: np.ndarray     # (N,) raw pre-clip draws
    log_probs: np.ndarray   # (N,) behavior-policy log densities
    rewards: np.ndarray     # (N,)
    values: np.ndarray      # (N,) critic values at collection time
    dones: np.ndarray       # (N,) bool
    episode_slices: list[slice] = field(default_factory=list)

    def __post_init__(self) -> None:
        for sl in self.episode_slices:
            if not self.dones[sl][-1]:
                raise ValueError("every episode in a batch must be terminated")

    @classmethod
    def from_episodes(cls, episodes: list[dict]) -> "TransitionBatch":
        slices, start = [], 0
        for ep in episodes:
            n = len(ep["rewards"])
            slices.append(slice(start, start + n))
            start += n
        cat = lambda key: np.concatenate([np.asarray(ep[key]) for ep in episodes])
        return cls(
            states=cat("states"),
            actions=cat("actions"),
            log_probs=cat("log_probs"),
            rewards=cat("rewards"),
            values=cat("values"),
            dones=cat("dones").astype(bool),
            episode_slices=slices,
        )

    def __len__(self) -> int:
        return len(self.rewards)


def compute_gae(
    batch: TransitionBatch, discount: float, lam: float
) -> tuple[np.ndarray, np.ndarray]:
    """Normalized advantages and value targets.

    delta_t = r_t + discount V_{t+1} (1 - done_t) - V_t accumulated with decay
    discount*lam within each episode; returns are raw advantages plus values,
    then advantages are normalized to zero mean and unit variance per batch.
    """
    adv = np.zeros(len(batch))
    for sl in batch.episode_slices:
        r = batch.rewards[sl]
        v = batch.values[sl]
        d = batch.dones[sl]
        last = 0.0
        for t in range(len(r) - 1, -1, -1):
            next_v = v[t + 1] if t + 1 < len(r) else 0.0
            nonterminal = 0.0 if d[t] else 1.0
            delta = r[t] + discount * next_v * nonterminal - v[t]
            last = delta + discount * lam * nonterminal * last
            adv[sl.start + t] = last
    returns = adv + batch.values
    normalized = (adv - adv.mean()) / (adv.std() + 1e-8)
    return normalized, returns


@dataclass
class AdamState:
    """First/second moment accumulators aligned with ``MlpParams.flat()``."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def for_params(cls, params: MlpParams) -> "AdamState":
        flat = params.flat()
        return cls(
            m=[np.zeros_like(p) for p in flat],
            v=[np.zeros_like(p) for p in flat],
        )

    def apply(self, params: MlpParams, grads: list[np.ndarray], lr: float) -> None:
        self.t += 1
        flat = params.flat()
        correction1 = 1.0 - self.beta1**self.t
        correction2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(flat, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= lr * (m / correction1) / (np.sqrt(v / correction2) + self.eps)


def _loss_and_grads(
    params: MlpParams,
    states: np.ndarray,
    actions: np.ndarray,
    log_probs_old: np.ndarray,
    advantages: np.ndarray,
    returns: np.ndarray,
    hyper: PpoHyper,
):
    """Clipped-surrogate + value loss with analytic gradients in flat() order."""
    n = len(actions)
    z, actor_cache = _net_forward(params.actor, states)
    values, critic_cache = _net_forward(params.critic, states)
    mean = _sigmoid(z)
    log_std = float(params.log_std)
    std = math.exp(log_std)

    zscore = (actions - mean) / std
    log_probs = -0.5 * zscore**2 - log_std - _LOG_SQRT_2PI
    ratio = np.exp(log_probs - log_probs_old)
    surr1 = ratio * advantages
    surr2 = np.clip(ratio, 1.0 - hyper.clip_epsilon, 1.0 + hyper.clip_epsilon) * advantages
    actor_loss = -np.mean(np.minimum(surr1, surr2))
    value_err = values - returns
    critic_loss = np.mean(value_err**2)
    entropy = log_std + 0.5 + _LOG_SQRT_2PI
    loss = actor_loss + hyper.value_coef * critic_loss - hyper.entropy_coef * entropy

    # d loss / d log_probs: gradient flows only where the unclipped branch is active.
    active = surr1 <= surr2
    dlogp = np.where(active, -advantages * ratio, 0.0) / n
    dmean = dlogp * zscore / std
    dz = dmean * mean * (1.0 - mean)
    actor_grads = _net_backward(params.actor, actor_cache, dz)

    dvalues = hyper.value_coef * 2.0 * value_err / n
    critic_grads = _net_backward(params.critic, critic_cache, dvalues)

    dlog_std = float(np.sum(dlogp * (zscore**2 - 1.0))) - hyper.entropy_coef
    grads = actor_grads + critic_grads + [np.array(dlog_std)]
    return float(loss), grads


def surrogate_loss(
    params: MlpParams,
    states: np.ndarray,
    actions: np.ndarray,
    log_probs_old: np.ndarray,
    advantages: np.ndarray,
    returns: np.ndarray,
    hyper: PpoHyper,
) -> float:
    """The scalar objective alone (finite-difference testing hook)."""
    loss, _ = _loss_and_grads(
        params, states, actions, log_probs_old, advantages, returns, hyper
    )
    return loss


def ppo_update(
    params: MlpParams,
    batch: TransitionBatch,
    hyper: PpoHyper,
    adam_state: AdamState | None = None,
) -> tuple[MlpParams, AdamState]:
    """Run ``update_epochs`` full-batch clipped-surrogate passes in place."""
    advantages, returns = compute_gae(batch, hyper.discount, hyper.gae_lambda)
    if adam_state is None:
        adam_state = AdamState.for_params(params)
    for epoch in range(hyper.update_epochs):
        loss, grads = _loss_and_grads(
            params, batch.states, batch.actions, batch.log_probs,
            advantages, returns, hyper,
        )
        if not np.isfinite(loss):
            raise NumericalInstabilityError(
                f"non-finite PPO loss at epoch {epoch}: "
                f"|adv|max={np.max(np.abs(advantages)):.3g}, "
                f"|ret|max={np.max(np.abs(returns)):.3g}, "
                f"log_std={float(params.log_std):.3g}"
            )
        adam_state.apply(params, grads, hyper.learning_rate)
    return params, adam_state


# ------------------------------------------------------------------
# Checkpoints
# ------------------------------------------------------------------

def _net_shapes(net: list[list[np.ndarray]]) -> list[list[int]]:
    return [list(w.shape) for w, b in net]


def _net_to_flat(net: list[list[np.ndarray]]) -> list[float]:
    chunks = []
    for w, b in net:
        chunks.append(w.ravel())
        chunks.append(b)
    return [float(x) for x in np.concatenate(chunks)]


def _net_from_flat(flat: list[float], shapes: list[list[int]]) -> list[list[np.ndarray]]:
    arr = np.asarray(flat, dtype=float)
    expected = sum(int(i) * int(o) + int(o) for i, o in shapes)
    if arr.size != expected:
        raise CheckpointError(
            f"weight count {arr.size} does not match layer shapes (expected {expected})"
        )
    net, pos = [], 0
    for fan_in, fan_out in shapes:
        w = arr[pos : pos + fan_in * fan_out].reshape(fan_in, fan_out).copy()
        pos += fan_in * fan_out
        b = arr[pos : pos + fan_out].copy()
        pos += fan_out
        net.append([w, b])
    return net


def save_checkpoint(params: MlpParams, hyper: PpoHyper, metadata: dict, path) -> None:
    """Write a versioned JSON checkpoint (atomic: temp file then rename)."""
    doc = {
        "format_version": CHECKPOINT_VERSION,
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "hyper": asdict(hyper),
        "layer_shapes": {
            "actor": _net_shapes(params.actor),
            "critic": _net_shapes(params.critic),
        },
        "actor_weights": _net_to_flat(params.actor),
        "critic_weights": _net_to_flat(params.critic),
        "log_std": float(params.log_std),
        "metadata": metadata,
    }
    path = os.fspath(path)
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


def load_checkpoint(path) -> tuple[MlpParams, PpoHyper, dict]:
    """Load a checkpoint; raises CheckpointError on version/shape/parse problems."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        # "loadable checkpoint" is a caller precondition, so a missing or
        # unreadable file is a configuration problem, not an output failure.
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CheckpointError(f"malformed checkpoint file {path}: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CheckpointError(f"not a checkpoint file: {path}")
    if doc["format_version"] != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint version {doc['format_version']} unsupported "
            f"(expected {CHECKPOINT_VERSION})"
        )
    try:
        params = MlpParams(
            actor=_net_from_flat(doc["actor_weights"], doc["layer_shapes"]["actor"]),
            critic=_net_from_flat(doc["critic_weights"], doc["layer_shapes"]["critic"]),
            log_std=np.array(float(doc["log_std"])),
        )
        hyper = PpoHyper(**doc["hyper"])
        metadata = doc.get("metadata", {})
    except (KeyError, TypeError) as exc:
        raise CheckpointError(f"malformed checkpoint file {path}: {exc}") from exc
    return params, hyper, metadata
