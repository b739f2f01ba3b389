"""Contraction trees, dense and sparse-stabilizer (SST) costs, and tree search."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence, Union

import numpy as np

from .network import TensorNetwork
from .symplectic import (
    ContractViolation,
    ResourceLimitError,
    _reduce_rows,
    extract_legs,
    rank_of_rows,
    trace_rows,
)

TreeSpec = Union[int, tuple["TreeSpec", "TreeSpec"]]

DEFAULT_OPTIMAL_CAP = 12
ALPHA_RANGE = (0.0, 2.0)
TAU_RANGE = (1e-2, 1.0)


class CostKind(str, Enum):
    DENSE = "dense"
    SST = "sst"


class TreeMismatchError(ContractViolation):
    """A contraction tree does not fit the network it is applied to."""


def _as_spec(obj) -> TreeSpec:
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise TreeMismatchError(f"internal tree nodes need exactly two children, got {obj!r}")
        return (_as_spec(obj[0]), _as_spec(obj[1]))
    if isinstance(obj, bool) or not isinstance(obj, (int, np.integer)):
        raise TreeMismatchError(f"tree leaves must be node ids, got {obj!r}")
    return int(obj)


@dataclass(frozen=True)
class ContractionTree:
    """Full binary merge tree; leaves are network node ids."""

    root: TreeSpec

    @classmethod
    def from_json(cls, data) -> "ContractionTree":
        return cls(_as_spec(data))

    def to_json(self):
        def conv(t):
            return t if isinstance(t, int) else [conv(t[0]), conv(t[1])]

        return conv(self.root)

    def leaves(self) -> list[int]:
        out = []
        stack = [self.root]
        while stack:
            t = stack.pop()
            if isinstance(t, int):
                out.append(t)
            else:
                stack.append(t[1])
                stack.append(t[0])
        return out

    def merges(self) -> list[tuple[int, int]]:
        """Post-order (left leaf mask, right leaf mask) per internal node."""
        out: list[tuple[int, int]] = []

        def walk(t) -> int:
            if isinstance(t, int):
                return 1 << t
            a = walk(t[0])
            b = walk(t[1])
            out.append((a, b))
            return a | b

        walk(self.root)
        return out

    def validate(self, net: TensorNetwork) -> None:
        leaves = self.leaves()
        if sorted(leaves) != list(range(len(net.nodes))):
            raise TreeMismatchError(
                f"tree leaves {sorted(leaves)} are not the node ids 0..{len(net.nodes) - 1}"
            )
        nbr = neighbour_masks(net)
        for a, b in self.merges():
            if not any(nbr[i] & b for i in _bits(a)):
                raise TreeMismatchError(
                    f"merge of {_bits(a)} and {_bits(b)} crosses no network edge"
                )

    def __str__(self) -> str:
        return str(self.to_json()).replace(" ", "")


def tree_from_merges(n_nodes: int, merges: Sequence[tuple[int, int]]) -> ContractionTree:
    """Build a tree from a merge list over leaf masks."""
    subtree: dict[int, TreeSpec] = {1 << i: i for i in range(n_nodes)}
    for a, b in merges:
        subtree[a | b] = (subtree.pop(a), subtree.pop(b))
    (root,) = subtree.values()
    return ContractionTree(root)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def neighbour_masks(net: TensorNetwork) -> list[int]:
    nbr = [0] * len(net.nodes)
    for (u, _), (v, _) in net.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
    return nbr


# -- cost reports -------------------------------------------------------------


@dataclass(frozen=True)
class MergeCost:
    left_open: int
    right_open: int
    left_rank: int | None
    right_rank: int | None
    stacked_rank: int | None
    cost: int


@dataclass(frozen=True)
class CostReport:
    kind: CostKind
    merges: tuple[MergeCost, ...]
    total: int

    def to_json(self) -> dict:
        return {
            "cost_kind": self.kind.value,
            "total": self.total,
            "merges": [
                {
                    "left_open": m.left_open,
                    "right_open": m.right_open,
                    "left_rank": m.left_rank,
                    "right_rank": m.right_rank,
                    "stacked_rank": m.stacked_rank,
                    "cost": m.cost,
                }
                for m in self.merges
            ],
        }


class _Components:
    """Leaf-mask keyed open-leg bookkeeping shared by the cost functions."""

    def __init__(self, net: TensorNetwork):
        self.net = net
        self.edge_ends = [((u, lu), (v, lv)) for (u, lu), (v, lv) in net.edges]
        self._open: dict[int, int] = {}
        self._proj: dict[int, tuple[tuple, list[int]]] = {}

    def open_count(self, mask: int) -> int:
        c = self._open.get(mask)
        if c is None:
            c = sum(
                1
                for (u, _), (v, _) in self.edge_ends
                if ((mask >> u) & 1) != ((mask >> v) & 1)
            )
            self._open[mask] = c
        return c

    def projected(self, mask: int, split: tuple[int, int] | None = None):
        """Open legs and reduced generator rows of a component's open-leg group."""
        hit = self._proj.get(mask)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            i = mask.bit_length() - 1
            node = self.net.nodes[i]
            legs = self.net.edge_legs[i]
            cols = [node.column(leg) for leg in legs]
            rows = _reduce_rows([extract_legs(r, cols) for r in node.pcm.rows], 2 * len(cols))
            hit = (tuple((i, leg) for leg in legs), rows)
        else:
            if split is None:
                raise KeyError("component PCM requested before its children")
            a, b = split
            hit = self._merge(a, b)[2]
        self._proj[mask] = hit
        return hit

    def _merge(self, a: int, b: int):
        legs_a, rows_a = self.projected(a)
        legs_b, rows_b = self.projected(b)
        pos_a = {ep: i for i, ep in enumerate(legs_a)}
        pos_b = {ep: i for i, ep in enumerate(legs_b)}
        pairs = []
        for ep in legs_a:
            other = self.net.partner[ep]
            if other in pos_b:
                pairs.append((pos_a[ep], pos_b[other]))
        if not pairs:
            raise TreeMismatchError(f"merge of {_bits(a)} and {_bits(b)} crosses no network edge")
        ja = [p for p, _ in pairs]
        jb = [q for _, q in pairs]
        stacked = [extract_legs(r, ja) for r in rows_a] + [extract_legs(r, jb) for r in rows_b]
        w = rank_of_rows(stacked)
        rows = trace_rows(rows_a, len(legs_a), rows_b, len(legs_b), pairs)
        dropped_a, dropped_b = set(ja), set(jb)
        legs = tuple(ep for i, ep in enumerate(legs_a) if i not in dropped_a) + tuple(
            ep for i, ep in enumerate(legs_b) if i not in dropped_b
        )
        return len(rows_a), len(rows_b), (legs, rows), w

    def sst_merge(self, a: int, b: int) -> MergeCost:
        ra, rb, merged, w = self._merge(a, b)
        self._proj.setdefault(a | b, merged)
        return MergeCost(len(self._proj[a][0]), len(self._proj[b][0]), ra, rb, w, 1 << (ra + rb - w))

    def dense_merge(self, a: int, b: int) -> MergeCost:
        la, lb = self.open_count(a), self.open_count(b)
        return MergeCost(la, lb, None, None, None, 4 ** (la + lb))


def dense_cost(net: TensorNetwork, tree: ContractionTree) -> CostReport:
    """Sum over merges of 4**(open legs of left + open legs of right)."""
    tree.validate(net)
    comps = _Components(net)
    rows = tuple(comps.dense_merge(a, b) for a, b in tree.merges())
    return CostReport(CostKind.DENSE, rows, sum(m.cost for m in rows))


def sst_cost(net: TensorNetwork, tree: ContractionTree) -> CostReport:
    """Exact count of polynomial multiplications for a sparse contraction.

    Each merge costs 2**(r1 + r2 - rank(W)) where r1, r2 are the ranks of
    the two children's stabilizer groups projected onto their open legs and
    W stacks both projections restricted to the joined legs.
    """
    tree.validate(net)
    comps = _Components(net)
    rows = tuple(comps.sst_merge(a, b) for a, b in tree.merges())
    return CostReport(CostKind.SST, rows, sum(m.cost for m in rows))


def tree_cost(net: TensorNetwork, tree: ContractionTree, kind: CostKind | str) -> CostReport:
    return sst_cost(net, tree) if CostKind(kind) is CostKind.SST else dense_cost(net, tree)


# -- optimal trees ------------------------------------------------------------


def _connected_masks(n: int, nbr: list[int]) -> list[int]:
    out = []
    for mask in range(1, 1 << n):
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbr[low.bit_length() - 1] & mask & ~seen
            seen |= new
            frontier |= new
        if seen == mask:
            out.append(mask)
    return out


def optimal_tree(
    net: TensorNetwork, cost_kind: CostKind | str, cap: int = DEFAULT_OPTIMAL_CAP
) -> tuple[ContractionTree, CostReport]:
    """Exact minimum-cost tree by dynamic programming over connected subsets.

    The left child of every merge is the part holding the lowest node id;
    among equal-cost splits the numerically smallest left mask wins.
    """
    kind = CostKind(cost_kind)
    n = len(net.nodes)
    if n > cap:
        raise ResourceLimitError(
            f"optimal search over {n} nodes exceeds cap {cap}; use hyper_greedy instead"
        )
    net.require_connected()
    if n == 1:
        tree = ContractionTree(0)
        return tree, CostReport(kind, (), 0)
    nbr = neighbour_masks(net)
    conn = _connected_masks(n, nbr)
    is_conn = set(conn)
    comps = _Components(net)
    merge = comps.sst_merge if kind is CostKind.SST else comps.dense_merge
    best: dict[int, tuple[int, tuple[int, int] | None]] = {1 << i: (0, None) for i in range(n)}
    for mask in sorted(conn, key=lambda m: (m.bit_count(), m)):
        if mask & (mask - 1) == 0:
            comps.projected(mask)
            continue
        low = mask & -mask
        rest = mask ^ low
        subs = []
        sub = rest
        while True:
            subs.append(sub | low)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best_cost, best_split = None, None
        for a in reversed(subs):
            if a == mask:
                continue
            b = mask ^ a
            if a not in is_conn or b not in is_conn:
                continue
            c = best[a][0] + best[b][0]
            if best_cost is not None and c >= best_cost:
                continue
            c += merge(a, b).cost
            if best_cost is None or c < best_cost:
                best_cost, best_split = c, (a, b)
        best[mask] = (best_cost, best_split)
        if kind is CostKind.SST:
            comps.projected(mask, best_split)

    def build(mask) -> TreeSpec:
        split = best[mask][1]
        if split is None:
            return mask.bit_length() - 1
        return (build(split[0]), build(split[1]))

    tree = ContractionTree(build((1 << n) - 1))
    return tree, tree_cost(net, tree, kind)


# -- greedy sampling ------------------------------------------------------------


@dataclass(frozen=True)
class GreedyParams:
    alpha: float = 1.0
    tau: float = 1.0
    seed: int = 0
    rank_size: bool = False

    def __post_init__(self):
        if self.alpha < 0:
            raise ContractViolation(f"alpha must be >= 0, got {self.alpha}")
        if not self.tau > 0:
            raise ContractViolation(f"tau must be > 0, got {self.tau}")


def _greedy_score(alpha: float, tau: float, si: float, sj: float, sk: float) -> float:
    if alpha == 0.0:
        return -sk / tau
    return (alpha * (si + sj) - sk / alpha) / tau


def greedy_merges(
    net: TensorNetwork, params: GreedyParams, record: list | None = None
) -> list[tuple[int, int]]:
    """Bottom-up Boltzmann-weighted pair merging; returns the merge list.

    Sizes are log2 element counts: 2 * open legs (dense) or the projected
    rank (``rank_size``).  A pair (i, j) -> k is drawn with log-weight
    (alpha*(s_i + s_j) - s_k/alpha)/tau via the Gumbel-max trick, which
    samples the Boltzmann distribution exactly without overflow.
    """
    net.require_connected()
    rng = np.random.default_rng(params.seed)
    comps = _Components(net)
    nbr = neighbour_masks(net)
    live = [1 << i for i in range(len(net.nodes))]

    def size(mask: int) -> float:
        if params.rank_size:
            return float(len(comps.projected(mask)[1]))
        return 2.0 * comps.open_count(mask)

    def adjacent(a: int, b: int) -> bool:
        return any(nbr[i] & b for i in _bits(a))

    merges: list[tuple[int, int]] = []
    while len(live) > 1:
        live.sort()
        cands = []
        for x in range(len(live)):
            for y in range(x + 1, len(live)):
                a, b = live[x], live[y]
                if adjacent(a, b):
                    cands.append((a, b))
        scores = []
        for a, b in cands:
            if params.rank_size and (a | b) not in comps._proj:
                comps.projected(a | b, (a, b))
            scores.append(_greedy_score(params.alpha, params.tau, size(a), size(b), size(a | b)))
        noise = rng.gumbel(size=len(cands))
        scores_arr = np.asarray(scores)
        pick = int(np.argmax(scores_arr + noise))
        a, b = cands[pick]
        if record is not None:
            record.append((scores_arr[pick], float(scores_arr.max()), len(cands)))
        merges.append((a, b))
        live.remove(a)
        live.remove(b)
        live.append(a | b)
    return merges


def greedy_sample(
    net: TensorNetwork, cost_kind: CostKind | str, params: GreedyParams
) -> tuple[ContractionTree, CostReport]:
    tree = tree_from_merges(len(net.nodes), greedy_merges(net, params))
    return tree, tree_cost(net, tree, cost_kind)


def random_tree(net: TensorNetwork, seed: int) -> ContractionTree:
    """Uniformly random sequence of edge-connected merges."""
    rng = np.random.default_rng(seed)
    nbr = neighbour_masks(net)
    live = [1 << i for i in range(len(net.nodes))]
    merges = []
    while len(live) > 1:
        cands = [
            (live[x], live[y])
            for x in range(len(live))
            for y in range(x + 1, len(live))
            if any(nbr[i] & live[y] for i in _bits(live[x]))
        ]
        if not cands:
            raise ContractViolation("network is disconnected")
        a, b = cands[int(rng.integers(len(cands)))]
        merges.append((a, b))
        live.remove(a)
        live.remove(b)
        live.append(a | b)
    return tree_from_merges(len(net.nodes), merges)


# -- hyper-greedy random search --------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    alpha: float
    tau: float
    seed: int
    total: int
    wall_ms: float = field(compare=False)


@dataclass
class HyperResult:
    tree: ContractionTree
    report: CostReport
    trials: list[TrialRecord]
    deterministic: bool


def trial_params(master_seed: int, trial: int, rank_size: bool = False) -> GreedyParams:
    """Hyperparameters of one trial, a pure function of (master_seed, trial)."""
    rng = np.random.default_rng([master_seed, trial])
    alpha = float(rng.uniform(*ALPHA_RANGE))
    tau = float(math.exp(rng.uniform(math.log(TAU_RANGE[0]), math.log(TAU_RANGE[1]))))
    seed = int(rng.integers(0, 2**63 - 1))
    return GreedyParams(alpha, tau, seed, rank_size)


def _run_trial(net, kind, master_seed, trial, rank_size):
    params = trial_params(master_seed, trial, rank_size)
    t0 = time.perf_counter()
    tree, report = greedy_sample(net, kind, params)
    wall = (time.perf_counter() - t0) * 1e3
    return TrialRecord(trial, params.alpha, params.tau, params.seed, report.total, wall), tree, report


def hyper_greedy(
    net: TensorNetwork,
    cost_kind: CostKind | str,
    trials: int | None = 64,
    wall_clock: float | None = None,
    master_seed: int = 0,
    threads: int | None = 1,
    rank_size: bool = False,
) -> HyperResult:
    """Seeded random search over (alpha, tau); keeps the cheapest tree.

    With a trial budget the result depends only on ``master_seed`` and the
    trial count.  A ``wall_clock`` budget (seconds) runs trials until time is
    up and is flagged nondeterministic.
    """
    kind = CostKind(cost_kind)
    if wall_clock is not None:
        if wall_clock <= 0:
            raise ContractViolation("wall-clock budget must be positive")
        deadline = time.monotonic() + wall_clock
        results = []
        t = 0
        while not results or time.monotonic() < deadline:
            if trials is not None and t >= trials:
                break
            results.append(_run_trial(net, kind, master_seed, t, rank_size))
            t += 1
        deterministic = False
    else:
        if trials is None or trials < 1:
            raise ContractViolation("trial budget must be positive")
        workers = threads or os.cpu_count() or 1
        if workers > 1 and trials > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futs = [
                    pool.submit(_run_trial, net, kind, master_seed, t, rank_size) for t in range(trials)
                ]
                results = [f.result() for f in futs]
        else:
            results = [_run_trial(net, kind, master_seed, t, rank_size) for t in range(trials)]
        deterministic = True
    rec, tree, report = min(results, key=lambda r: (r[0].total, r[0].trial))
    return HyperResult(tree, report, [r[0] for r in results], deterministic)


# -- brute-force crossover -------------------------------------------------------


@dataclass(frozen=True)
class CrossoverReport:
    brute_force_cost: int
    contraction_cost: int
    winner: str
    factor: float

    def to_json(self) -> dict:
        return {
            "brute_force_cost": self.brute_force_cost,
            "contraction_cost": self.contraction_cost,
            "winner": self.winner,
            "factor": self.factor,
        }


def crossover(n: int, k: int, contraction_cost: int) -> CrossoverReport:
    brute = 1 << (n - k)
    if contraction_cost < brute:
        winner = "contraction"
    elif contraction_cost > brute:
        winner = "brute_force"
    else:
        winner = "tie"
    hi, lo = max(brute, contraction_cost), max(1, min(brute, contraction_cost))
    return CrossoverReport(brute, contraction_cost, winner, hi / lo)


def brute_force_crossover(
    net: TensorNetwork, code, trials: int = 64, master_seed: int = 0, best_total: int | None = None
) -> CrossoverReport:
    """Best SST-optimised contraction cost versus 2**(n-k) brute-force enumeration."""
    if best_total is None:
        best_total = hyper_greedy(net, CostKind.SST, trials=trials, master_seed=master_seed).report.total
    return crossover(code.n, code.k, best_total)


def iter_trees(net: TensorNetwork) -> Iterator[ContractionTree]:
    """Every valid tree, mirror images collapsed (left child holds the lowest id)."""
    nbr = neighbour_masks(net)
    conn = set(_connected_masks(len(net.nodes), nbr))

    def gen(mask):
        if mask & (mask - 1) == 0:
            yield mask.bit_length() - 1
            return
        low = mask & -mask
        rest = mask ^ low
        sub = rest
        while True:
            a = sub | low
            b = mask ^ a
            if a != mask and a in conn and b in conn:
                for left in gen(a):
                    for right in gen(b):
                        yield (left, right)
            if sub == 0:
                break
            sub = (sub - 1) & rest

    for spec in gen((1 << len(net.nodes)) - 1):
        yield ContractionTree(spec)
