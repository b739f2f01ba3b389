"""Brute force 2^(n-k) against the best SST contraction for each layout of each built-in code."""

import argparse
import sys

from sstlego import layouts
from sstlego.network import builtin_code
from sstlego.schedule import CostKind, crossover, hyper_greedy

CODES = ["code422", "code513", "steane7", "shor9", "rsc3", "hamming15_7_3", "rsc5"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("code,layout,n,k,brute_force_cost,sst_cost,winner,factor")
    for name in CODES:
        code = builtin_code(name)
        for label, make in (("msp", layouts.layout_msp), ("tanner", layouts.layout_tanner)):
            net = make(code)
            best = hyper_greedy(net, CostKind.SST, trials=args.trials, master_seed=args.seed, threads=1)
            rep = crossover(code.n, code.k, best.report.total)
            print(f"{name},{label},{code.n},{code.k},{rep.brute_force_cost},{rep.contraction_cost},"
                  f"{rep.winner},{rep.factor:.4g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
