"""
Training a feedback controller
==============================

Trains the PPO agent on one of the noise presets and inspects what it
learned.  The run writes the usual artifact set (checkpoint, learning
curve, eval stats, manifest) under demos/output/, so the CLI's evaluate,
transfer and export commands can pick the result up afterwards.
"""

import argparse
from pathlib import Path

from streamqc.env import EpisodeLog, QubitFlipEnv
from streamqc.experiments import (
    PRESET_TARGETS,
    collect_episode,
    env_config_for_preset,
    run_train,
    seed_for,
)

parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
parser.add_argument("--preset", default="detuning", choices=sorted(PRESET_TARGETS))
parser.add_argument("--episodes", type=int, default=5000, help="training budget")
parser.add_argument("--seed", type=int, default=0, help="master seed")
parser.add_argument("--out", type=Path, default=None, help="artifact directory")
args = parser.parse_args()
out = args.out or Path(__file__).parent / "output" / f"train_{args.preset}"

# Early stopping is on by default: training halts once a 20-episode
# deterministic evaluation clears the preset's target with a small margin,
# so easy presets finish in a few hundred episodes.
result, stats, manifest = run_train(
    args.preset, args.episodes, args.seed, out, log_every=None
)
print(f"preset {args.preset}, target {PRESET_TARGETS[args.preset]}, seed {args.seed}")
print(f"  episodes run             {result.episodes_run}")
print(f"  stopped early            {result.stopped_early}")
print(f"  first sustained success  {result.first_sustained}")
print(f"  eval fidelity            {stats.mean:.4f} +/- {stats.std:.4f} "
      f"(min {stats.min:.4f} over {stats.episode_count} episodes)")

# The learning curve shows the usual phase structure: random flailing,
# then a jump when the bonus is first reached, then refinement.
print("learning curve (total reward, averaged over 20-episode batches)")
curve = result.curve
batches = [curve[i:i + 20] for i in range(0, len(curve), 20)]
stride = max(1, len(batches) // 8)
shown = batches[::stride]
if shown[-1] is not batches[-1]:
    shown.append(batches[-1])
for chunk in shown:
    avg_reward = sum(r[1] for r in chunk) / len(chunk)
    avg_fid = sum(r[2] for r in chunk) / len(chunk)
    print(f"  episodes {chunk[0][0]:4d}-{chunk[-1][0]:4d}  "
          f"reward {avg_reward:9.2f}  final fidelity {avg_fid:.4f}")

# Greedy rollout on a fresh episode: the interesting part is the pulse
# shape.  A detuning-robust policy does not just replay the ideal constant
# drive; it reacts to the weak readouts along the way.
env = QubitFlipEnv(env_config_for_preset(args.preset),
                   seed=seed_for(args.seed, 3, 10_001))
_, log, total = collect_episode(env, result.params, None, deterministic=True)
col = {name: i for i, name in enumerate(EpisodeLog.CSV_COLUMNS)}
rows = list(log.rows())
print(f"greedy rollout: {len(rows)} steps, total reward {total:.2f}, "
      f"terminal fidelity {log.terminal_fidelity:.4f}")
print(f"  {'step':>4}  {'omega':>7}  {'q0':>4}  {'exp_z':>7}  {'fidelity':>8}")
for row in rows[::10] + ([rows[-1]] if (len(rows) - 1) % 10 else []):
    print(f"  {row[col['step']]:4d}  {row[col['omega']]:7.3f}  "
          f"{row[col['q0']]:4d}  {row[col['exp_z']]:7.3f}  "
          f"{row[col['fidelity']]:8.4f}")
print(f"artifacts in {out}")
