"""Command line interface: layouts, WEPs, schedule comparison and density traces.

Exit codes: 0 ok, 2 bad input, 3 resource cap hit, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import layouts
from .enumerator import (
    StateHasNoDistance,
    brute_force_wep,
    contract_network,
    distance,
    macwilliams_B,
)
from .network import (
    CodeSpec,
    TensorNetwork,
    builtin_code,
    dump_network,
    ingest_code,
    load_network,
    network_pcm,
    network_to_dict,
)
from .schedule import (
    DEFAULT_OPTIMAL_CAP,
    ContractionTree,
    CostKind,
    crossover,
    dense_cost,
    hyper_greedy,
    optimal_tree,
    sst_cost,
)
from .symplectic import ResourceLimitError, rank

EXIT_OK, EXIT_INPUT, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4
THREADS_ENV = "SSTLEGO_THREADS"


class VerificationError(RuntimeError):
    """An internal cross-check failed."""


def tool_version() -> str:
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:
        return "0.0.0+local"


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class RunManifest:
    command: str
    parameters: dict
    master_seed: int | None
    deterministic: bool = True
    tool_version: str = field(default_factory=tool_version)
    input_digests: dict = field(default_factory=dict)
    started: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    finished: str | None = None

    def add_input(self, path) -> None:
        data = Path(path).read_bytes()
        self.input_digests[str(path)] = hashlib.sha256(data).hexdigest()

    def close(self) -> dict:
        self.finished = datetime.now(timezone.utc).isoformat()
        return asdict(self)


# -- input helpers -----------------------------------------------------------


def resolve_code(ref: str) -> CodeSpec:
    """A PCM file path, or the name of a built-in code."""
    path = Path(ref)
    if path.is_file():
        return ingest_code(path)
    try:
        return builtin_code(ref)
    except KeyError as exc:
        raise ValueError(f"{ref!r} is neither a file nor a built-in code ({exc.args[0]})") from None


def network_code(net: TensorNetwork) -> CodeSpec:
    H = network_pcm(net)
    return CodeSpec(H.n, H.n - rank(H), H, net.name)


def load_tree(path) -> ContractionTree:
    return ContractionTree.from_json(json.loads(Path(path).read_text()))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def choose_tree(net: TensorNetwork, kind: CostKind, how: str, trials: int, wall, seed: int, threads: int):
    """Returns (tree, deterministic)."""
    if how == "auto":
        how = "optimal" if len(net.nodes) <= DEFAULT_OPTIMAL_CAP else "greedy"
    if how == "optimal":
        return optimal_tree(net, kind)[0], True
    res = hyper_greedy(net, kind, trials=trials, wall_clock=wall, master_seed=seed, threads=threads)
    return res.tree, res.deterministic


# -- commands -----------------------------------------------------------------


def build_layout(args) -> TensorNetwork:
    kind = args.kind
    if kind == "concat_rep":
        return layouts.layout_concat_rep(args.distance, args.layers)
    if kind == "rsc":
        return layouts.layout_rsc(args.rows, args.cols)
    if kind == "happy":
        return layouts.layout_happy(args.layers)
    if args.code is None:
        raise ValueError(f"layout {kind} needs --code")
    code = resolve_code(args.code)
    return layouts.layout_msp(code) if kind == "msp" else layouts.layout_tanner(code)


def cmd_layout(args) -> int:
    net = build_layout(args)
    if args.out:
        dump_network(net, args.out)
    else:
        sys.stdout.write(_dump_json(network_to_dict(net)))
    print(
        f"{net.name or args.kind}: {len(net.nodes)} nodes, {len(net.edges)} edges, "
        f"{len(net.dangling)} dangling legs",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_wep(args) -> int:
    if (args.net is None) == (args.code is None):
        raise ValueError("give exactly one of --net or --code")
    manifest = RunManifest("wep", _params(args), args.seed)
    if args.net:
        manifest.add_input(args.net)
        net = load_network(args.net)
        code = network_code(net)
    else:
        code = resolve_code(args.code)
        if Path(args.code).is_file():
            manifest.add_input(args.code)
        net = layouts.layout_tanner(code) if args.method == "contract" else None

    out: dict = {"n": code.n, "k": code.k}
    if args.method == "brute":
        A = brute_force_wep(code.pcm)
        out["brute_force_cost"] = 1 << (code.n - code.k)
    else:
        kind = CostKind(args.cost)
        if args.tree:
            manifest.add_input(args.tree)
            tree = load_tree(args.tree)
        else:
            tree, det = choose_tree(net, kind, args.optimize, args.trials, args.wall, args.seed, args.threads)
            manifest.deterministic = det
        report = sst_cost(net, tree)
        A, true_cost, records = contract_network(net, tree)
        if report.total != true_cost:
            raise VerificationError(f"SST cost {report.total} != counted multiplications {true_cost}")
        out.update(
            tree=tree.to_json(),
            sst_cost=report.total,
            true_cost=true_cost,
            dense_cost=dense_cost(net, tree).total,
            brute_force_cost=1 << (code.n - code.k),
            mean_density=sum(r.decimal for r in records) / len(records),
        )
    B = macwilliams_B(A, code.n, code.k)
    try:
        d = distance(A, B)
    except StateHasNoDistance:
        d = None
    out.update(A=A.to_json()["coeffs"], B=B.to_json()["coeffs"], distance=d)
    out["A_str"], out["B_str"] = str(A), str(B)
    out["manifest"] = manifest.close()
    _write(args.out, _dump_json(out))
    print(f"A(z) = {A}\nB(z) = {B}\nd = {d}", file=sys.stderr)
    return EXIT_OK


def cmd_optimize(args) -> int:
    net = load_network(args.net)
    kind = CostKind(args.cost)
    tree, det = choose_tree(net, kind, args.method, args.trials, args.wall, args.seed, args.threads)
    if args.out:
        Path(args.out).write_text(json.dumps(tree.to_json()) + "\n")
    report = sst_cost(net, tree) if kind is CostKind.SST else dense_cost(net, tree)
    body = report.to_json()
    body["tree"] = tree.to_json()
    body["deterministic"] = det
    _write(args.report, _dump_json(body))
    return EXIT_OK


@dataclass(frozen=True)
class CompareConfig:
    trials: int | None = 64
    wall: float | None = None
    reps: int = 20
    seed: int = 0
    threads: int = 1
    timings: bool = False


def rep_seed(master_seed: int, rep: int) -> int:
    return int(np.random.default_rng([master_seed, rep, 1]).integers(0, 2**63 - 1))


def geo_stats(values: list[int]) -> tuple[float, float]:
    logs = [math.log(v) for v in values]
    mu = sum(logs) / len(logs)
    var = sum((x - mu) ** 2 for x in logs) / len(logs)
    return math.exp(mu), math.exp(math.sqrt(var))


def run_compare(net: TensorNetwork, cfg: CompareConfig, name: str = "") -> tuple[str, dict]:
    """DENSE vs SST hyper-greedy over ``cfg.reps`` repetitions.

    Returns the per-trial CSV text and a summary.  The true cost of a
    repetition is the exact SST cost of its best tree.  Wall times are only
    written when ``cfg.timings`` is set, so trial-budget CSVs are
    byte-stable.
    """
    name = name or net.name or "network"
    code = network_code(net)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["network", "cost_kind", "rep", "trial", "total_cost", "true_cost", "seed"]
    if cfg.timings:
        header.append("wall_ms")
    w.writerow(header)
    best: dict[str, list[int]] = {}
    deterministic = cfg.wall is None
    for kind in (CostKind.DENSE, CostKind.SST):
        best[kind.value] = []
        for rep in range(cfg.reps):
            res = hyper_greedy(
                net, kind, trials=cfg.trials, wall_clock=cfg.wall,
                master_seed=rep_seed(cfg.seed, rep), threads=cfg.threads,
            )
            true_cost = sst_cost(net, res.tree).total
            best[kind.value].append(true_cost)
            for t in res.trials:
                row = [name, kind.value, rep, t.trial, t.total, true_cost if t.total == res.report.total else "", t.seed]
                if cfg.timings:
                    row.append(f"{t.wall_ms:.3f}")
                w.writerow(row)
    gd, sd = geo_stats(best["dense"])
    gs, ss = geo_stats(best["sst"])
    summary = {
        "network": name,
        "n": code.n,
        "k": code.k,
        "nodes": len(net.nodes),
        "dense": {"geomean": gd, "geostd": sd, "best": best["dense"]},
        "sst": {"geomean": gs, "geostd": ss, "best": best["sst"]},
        "improvement_factor": gd / gs,
        "sst_over_dense": gs / gd,
        "crossover": crossover(code.n, code.k, min(best["sst"])).to_json(),
        "deterministic": deterministic,
    }
    return buf.getvalue(), summary


def cmd_compare(args) -> int:
    manifest = RunManifest("compare", _params(args), args.seed, deterministic=args.wall is None)
    manifest.add_input(args.net)
    net = load_network(args.net)
    cfg = CompareConfig(args.trials, args.wall, args.reps, args.seed, args.threads, args.timings)
    text, summary = run_compare(net, cfg, Path(args.net).stem)
    _write(args.out, text)
    summary["manifest"] = manifest.close()
    if args.summary:
        Path(args.summary).write_text(_dump_json(summary))
    print(
        f"dense geomean {summary['dense']['geomean']:.4g}, sst geomean {summary['sst']['geomean']:.4g}, "
        f"improvement {summary['improvement_factor']:.3f}, crossover winner {summary['crossover']['winner']}",
        file=sys.stderr,
    )
    return EXIT_OK


def density_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "open_legs", "nnz", "density"])
    for i, r in enumerate(records):
        w.writerow([i, r.open_leg_count, r.nnz, f"{r.decimal:.10g}"])
    return buf.getvalue()


def cmd_density(args) -> int:
    net = load_network(args.net)
    if args.tree:
        tree = load_tree(args.tree)
    else:
        tree, _ = choose_tree(net, CostKind(args.cost), "auto", args.trials, None, args.seed, args.threads)
    _, _, records = contract_network(net, tree)
    _write(args.out, density_csv(records))
    mean = sum(r.decimal for r in records) / len(records)
    print(f"{len(records)} intermediate tensors, mean density {mean:.4f}", file=sys.stderr)
    return EXIT_OK


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


# -- parser ---------------------------------------------------------------------


def _budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=64)
    p.add_argument("--wall", type=float, default=None, help="wall-clock budget in seconds (nondeterministic)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help=f"trial workers (default ${THREADS_ENV} or CPU count)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sstlego", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="generate a network JSON")
    p.add_argument("kind", choices=["concat_rep", "rsc", "happy", "msp", "tanner"])
    p.add_argument("--distance", type=int, default=3)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--code", help="PCM file or built-in code name (msp, tanner)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("wep", help="weight enumerators, MacWilliams dual and distance")
    p.add_argument("--net")
    p.add_argument("--code")
    p.add_argument("--method", choices=["brute", "contract"], default="contract")
    p.add_argument("--tree")
    p.add_argument("--optimize", choices=["auto", "optimal", "greedy"], default="auto")
    p.add_argument("--cost", choices=["sst", "dense"], default="sst")
    p.add_argument("--out")
    _budget(p)
    p.set_defaults(func=cmd_wep)

    p = sub.add_parser("optimize", help="find a contraction tree")
    p.add_argument("--net", required=True)
    p.add_argument("--method", choices=["auto", "optimal", "greedy"], default="auto")
    p.add_argument("--cost", choices=["sst", "dense"], default="sst")
    p.add_argument("--out", help="tree JSON path")
    p.add_argument("--report", help="cost report JSON path (default stdout)")
    _budget(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("compare", help="DENSE vs SST hyper-greedy experiment")
    p.add_argument("--net", required=True)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--out", help="per-trial CSV (default stdout)")
    p.add_argument("--summary", help="summary JSON path")
    p.add_argument("--timings", action="store_true", help="add a wall_ms column")
    _budget(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("density", help="intermediate tensor densities")
    p.add_argument("--net", required=True)
    p.add_argument("--tree")
    p.add_argument("--cost", choices=["sst", "dense"], default="sst")
    p.add_argument("--out")
    _budget(p)
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) is None:
        args.threads = default_threads()
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
