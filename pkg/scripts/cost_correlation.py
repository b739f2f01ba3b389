"""Dense and SST estimates against counted multiplications on random trees."""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _networks import BUILDERS, build  # noqa: E402

from sstlego.enumerator import contract_network  # noqa: E402
from sstlego.schedule import dense_cost, random_tree, sst_cost  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("networks", nargs="*", default=["rsc_3_3", "rsc_5_5", "tanner_steane", "happy_1"])
    ap.add_argument("--trees", type=int, default=50)
    ap.add_argument("--out", type=Path, default=Path("results/cost_correlation.csv"))
    args = ap.parse_args()
    unknown = sorted(set(args.networks) - set(BUILDERS))
    if unknown:
        ap.error(f"unknown networks {unknown}; choose from {sorted(BUILDERS)}")
    args.out.parent.mkdir(parents=True, exist_ok=True)

    mismatches = 0
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["network", "tree_seed", "dense_cost", "sst_cost", "true_cost"])
        for name in args.networks:
            net = build(name)
            for seed in range(args.trees):
                tree = random_tree(net, seed)
                true = contract_network(net, tree)[1]
                sst = sst_cost(net, tree).total
                mismatches += sst != true
                w.writerow([name, seed, dense_cost(net, tree).total, sst, true])
            print(f"{name}: {args.trees} trees done")
    print(f"SST mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
