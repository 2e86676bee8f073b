"""
Transferring a controller to harder noise
=========================================

Takes the agent trained on the relaxation preset, drops it into the hybrid
environment (detuning + dephasing + relaxation at once), measures how much
performance it loses, then fine-tunes.  Run 03_train_agent.py with
--preset relaxation first, or let this script train the source agent
itself when the checkpoint is missing.
"""

import argparse
from pathlib import Path

from streamqc.experiments import run_train, run_transfer

parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
parser.add_argument("--episodes", type=int, default=3000, help="fine-tune budget")
parser.add_argument("--seed", type=int, default=0, help="master seed")
parser.add_argument("--source", type=Path, default=None, help="source checkpoint")
args = parser.parse_args()

out_root = Path(__file__).parent / "output"
source = args.source or out_root / "train_relaxation" / "checkpoint.json"
if not source.exists():
    print(f"no source checkpoint at {source}, training the relaxation agent first")
    result, stats, _ = run_train("relaxation", 12000, args.seed,
                                 out_root / "train_relaxation")
    print(f"  trained in {result.episodes_run} episodes, "
          f"eval {stats.mean:.4f} +/- {stats.std:.4f}")

# The fine-tune run keeps the network weights but restarts the optimizer;
# the manifest and post-transfer checkpoint land in output/transfer_hybrid.
transfer, manifest = run_transfer(source, args.episodes, args.seed,
                                  out_root / "transfer_hybrid")

home = transfer.home_stats
print("transfer to hybrid noise")
if home is not None:
    print(f"  home preset fidelity     {home.mean:.4f} +/- {home.std:.4f}")
print(f"  hybrid before tuning     {transfer.pre_stats.mean:.4f} "
      f"+/- {transfer.pre_stats.std:.4f}")
if home is not None:
    print(f"  zero-shot drop           {home.mean - transfer.pre_stats.mean:.4f}")
print(f"  fine-tune episodes       {transfer.train.episodes_run}")
print(f"  hybrid after tuning      {transfer.post_stats.mean:.4f} "
      f"+/- {transfer.post_stats.std:.4f}")
print(f"artifacts in {out_root / 'transfer_hybrid'}")
