"""Command-line entry points for the simulation and training workflows.

Exit codes: 0 success, 2 configuration problem, 3 numerical instability,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import sys

from ._version import __version__
from .errors import ConfigError, NumericalInstabilityError
from .experiments import (
    run_evaluate,
    run_simulate,
    run_train,
    run_transfer,
)
from .runio import read_json

PRESET_CHOICES = ("detuning", "dephasing", "relaxation", "hybrid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamqc",
        description="Closed-loop qubit flip control under continuous weak measurement.",
    )
    parser.add_argument("--version", action="version", version=f"streamqc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="ensemble of monitored trajectories")
    p.add_argument("--dt-ratio", type=float, default=0.01,
                   help="measurement interval over total time (default 0.01)")
    p.add_argument("--ensemble", type=int, default=20)
    p.add_argument("--sigma", type=float, default=10.0, help="pointer width")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--checkpoint", default=None,
                   help="drive with this policy instead of the constant flip pulse")

    p = sub.add_parser("train", help="train a PPO agent against a noise preset")
    p.add_argument("--noise", required=True, choices=PRESET_CHOICES)
    p.add_argument("--episodes", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--out", required=True)
    p.add_argument("--no-early-stop", action="store_true",
                   help="always run the full episode budget")
    p.add_argument("--eval-episodes", type=int, default=100)
    p.add_argument("--log-every", type=int, default=0,
                   help="print progress every N episodes (0 = silent)")

    p = sub.add_parser("evaluate", help="evaluate a checkpoint (mean policy)")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--noise", required=True, choices=PRESET_CHOICES)
    p.add_argument("--episodes", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("transfer", help="fine-tune a checkpoint in the hybrid preset")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--episodes", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-early-stop", action="store_true")
    p.add_argument("--eval-episodes", type=int, default=100)
    p.add_argument("--log-every", type=int, default=0)

    p = sub.add_parser("export", help="list or copy a finished run's artifacts")
    p.add_argument("--run", required=True, help="run directory with manifest.json")
    p.add_argument("--what", required=True,
                   choices=("trajectories", "learning-curve", "stats"))
    p.add_argument("--out", default=None, help="copy artifacts into this directory")
    return parser


def _load_config_file(path) -> dict | None:
    if path is None:
        return None
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path!r} is not valid JSON: {exc}") from exc


def _cmd_simulate(args) -> None:
    _, manifest = run_simulate(
        args.dt_ratio, args.ensemble, args.sigma, args.seed, args.out,
        checkpoint_path=args.checkpoint,
    )
    print(f"wrote {len(manifest.artifacts)} artifacts to {args.out}")


def _cmd_train(args) -> None:
    result, stats, _ = run_train(
        args.noise, args.episodes, args.seed, args.out,
        config_doc=_load_config_file(args.config),
        early_stop=not args.no_early_stop,
        eval_episodes=args.eval_episodes,
        log_every=args.log_every or None,
    )
    sustained = result.first_sustained
    print(
        f"trained {result.episodes_run} episodes "
        f"(sustained success at {sustained if sustained is not None else 'n/a'}); "
        f"eval mean fidelity {stats.mean:.4f} +/- {stats.std:.4f}"
    )


def _cmd_evaluate(args) -> None:
    stats, _ = run_evaluate(
        args.checkpoint, args.noise, args.episodes, args.seed, args.out
    )
    print(
        f"evaluated {stats.episode_count} episodes: mean fidelity "
        f"{stats.mean:.4f} +/- {stats.std:.4f} (min {stats.min:.4f}, max {stats.max:.4f})"
    )


def _cmd_transfer(args) -> None:
    result, _ = run_transfer(
        args.checkpoint, args.episodes, args.seed, args.out,
        eval_episodes=args.eval_episodes,
        early_stop=not args.no_early_stop,
        log_every=args.log_every or None,
    )
    if result.home_stats is not None:
        print(f"home preset mean fidelity {result.home_stats.mean:.4f}")
    print(
        f"hybrid before fine-tune {result.pre_stats.mean:.4f}, "
        f"after {result.train.episodes_run} episodes {result.post_stats.mean:.4f}"
    )


_EXPORT_KEYS = {
    "trajectories": lambda k: "trajectory" in k or k in ("reference", "averages"),
    "learning-curve": lambda k: k == "learning_curve",
    "stats": lambda k: "stats" in k,
}


def _cmd_export(args) -> None:
    manifest_path = os.path.join(args.run, "manifest.json")
    if not os.path.exists(manifest_path):
        raise ConfigError(f"no manifest.json under {args.run!r}")
    manifest = read_json(manifest_path)
    artifacts = manifest.get("artifacts", {})
    keys = sorted(k for k in artifacts if _EXPORT_KEYS[args.what](k))
    if not keys:
        raise ConfigError(f"run {args.run!r} has no {args.what} artifacts")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    for key in keys:
        src = artifacts[key]
        if args.out:
            dst = os.path.join(args.out, os.path.basename(src))
            shutil.copy2(src, dst)
            print(dst)
        else:
            print(src)


_COMMANDS = {
    "simulate": _cmd_simulate,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "transfer": _cmd_transfer,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalInstabilityError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
