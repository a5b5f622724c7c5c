#!/usr/bin/env python3
"""Run the headline experiment grid and print the result tables.

Desk scale by default: 100 mappings on the small networks, fewer on the
big ones (routing the 54-node backbone costs ~30s per mapping across the
three redundancy levels), single-fault everywhere, two-fault only on the
14-node network.  The whole desk run finishes in about ten minutes.
--full switches to 1000 mappings and two-fault on every network; budget
a day for the 54-node backbone.  Output lands in experiments/ as csv
plus plotdata json.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from quorumcycles.lighttrail import TrailMode
from quorumcycles.report import ExperimentSpec, emit, run_experiment

NETWORKS = ("nsfnet", "arpanet", "american", "chinese")
DESK_MAPPINGS = {"nsfnet": 100, "arpanet": 100, "american": 50, "chinese": 10}
SEED = 20250815


def specs(full: bool) -> list[ExperimentSpec]:
    out = []
    for name in NETWORKS:
        orders = (1, 2) if (full or name == "nsfnet") else (1,)
        out.append(ExperimentSpec(
            network=name, topology=name, r_values=(1, 2, 3),
            modes=(TrailMode.PAIRED, TrailMode.SINGLE),
            fault_orders=orders,
            mapping_count=1000 if full else DESK_MAPPINGS[name], seed=SEED,
        ))
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--full", action="store_true",
                        help="1000 mappings, two-fault on all networks")
    parser.add_argument("--networks", nargs="*", default=list(NETWORKS),
                        choices=NETWORKS)
    args = parser.parse_args()

    out_dir = Path(__file__).resolve().parents[1] / "experiments"
    out_dir.mkdir(exist_ok=True)
    rows = []
    for spec in specs(args.full):
        if spec.network not in args.networks:
            continue
        t0 = time.perf_counter()
        rows.extend(run_experiment(spec))
        print(f"{spec.network}: done in {time.perf_counter()-t0:.1f}s",
              file=sys.stderr)

    print(emit(rows, "table"))
    scale = "full" if args.full else "desk"
    (out_dir / f"tables_{scale}.csv").write_text(emit(rows, "csv"))
    (out_dir / f"figures_{scale}.json").write_text(emit(rows, "plotdata"))
    print(f"wrote experiments/tables_{scale}.csv and figures_{scale}.json",
          file=sys.stderr)


if __name__ == "__main__":
    main()
