"""DENSE vs SST hyper-greedy over several networks.

Writes one summary row per network with geometric means, geometric standard
deviations, the improvement factor and the brute-force line.
"""

import argparse
import csv
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from _networks import BUILDERS, build  # noqa: E402

from sstlego.cli import CompareConfig, run_compare  # noqa: E402

DEFAULT = ["concat_rep_3_2", "rsc_5_5", "msp_steane", "tanner_steane", "tanner_rsc3", "happy_1"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("networks", nargs="*", default=DEFAULT)
    ap.add_argument("--trials", type=int, default=64)
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--outdir", type=Path, default=Path("results"))
    args = ap.parse_args()
    unknown = sorted(set(args.networks) - set(BUILDERS))
    if unknown:
        ap.error(f"unknown networks {unknown}; choose from {sorted(BUILDERS)}")
    args.outdir.mkdir(parents=True, exist_ok=True)

    cfg = CompareConfig(args.trials, None, args.reps, args.seed, args.threads)
    rows = []
    for name in args.networks:
        trials_csv, s = run_compare(build(name), cfg, name)
        (args.outdir / f"compare_{name}.csv").write_text(trials_csv)
        rows.append([
            name, s["n"], s["k"], s["nodes"],
            f"{s['dense']['geomean']:.6g}", f"{s['dense']['geostd']:.4g}",
            f"{s['sst']['geomean']:.6g}", f"{s['sst']['geostd']:.4g}",
            f"{s['improvement_factor']:.4f}", s["crossover"]["brute_force_cost"], s["crossover"]["winner"],
        ])
        print(f"{name:18s} dense {rows[-1][4]:>12s}  sst {rows[-1][6]:>12s}  factor {rows[-1][8]}  brute-force winner: {rows[-1][10]}")
    with open(args.outdir / "compare_summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["network", "n", "k", "nodes", "dense_geomean", "dense_geostd", "sst_geomean",
                    "sst_geostd", "improvement_factor", "brute_force_cost", "winner"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
