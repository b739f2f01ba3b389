"""Intermediate tensor densities per network."""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _networks import BUILDERS, build  # noqa: E402

from sstlego.enumerator import contract_network  # noqa: E402
from sstlego.schedule import CostKind, hyper_greedy, optimal_tree  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("networks", nargs="*", default=["concat_rep_3_2", "rsc_3_3", "rsc_5_5", "rsc_7_7", "tanner_steane"])
    ap.add_argument("--trials", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("results/density.csv"))
    args = ap.parse_args()
    unknown = sorted(set(args.networks) - set(BUILDERS))
    if unknown:
        ap.error(f"unknown networks {unknown}; choose from {sorted(BUILDERS)}")
    args.out.parent.mkdir(parents=True, exist_ok=True)

    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["network", "step", "open_legs", "nnz", "density"])
        for name in args.networks:
            net = build(name)
            if len(net.nodes) <= 12:
                tree = optimal_tree(net, CostKind.SST)[0]
            else:
                tree = hyper_greedy(net, CostKind.SST, trials=args.trials, master_seed=args.seed, threads=1).tree
            records = contract_network(net, tree)[2]
            for i, r in enumerate(records):
                w.writerow([name, i, r.open_leg_count, r.nnz, f"{r.decimal:.10g}"])
            mean = sum(r.decimal for r in records) / len(records)
            print(f"{name:16s} {len(records):4d} tensors  mean density {mean:.4f}")


if __name__ == "__main__":
    main()
