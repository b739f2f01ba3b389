import json
import random

import pytest

from sstlego.enumerator import contract_network
from sstlego.lego import LegoKind
from sstlego.network import TensorNetwork, make_node
from sstlego.schedule import (
    ContractionTree,
    CostKind,
    GreedyParams,
    TreeMismatchError,
    brute_force_crossover,
    crossover,
    dense_cost,
    greedy_merges,
    greedy_sample,
    hyper_greedy,
    iter_trees,
    optimal_tree,
    random_tree,
    sst_cost,
    trial_params,
)
from sstlego.network import builtin_code
from sstlego.symplectic import ContractViolation, ResourceLimitError

from conftest import desk_network


def bell_path(k: int) -> TensorNetwork:
    nodes = [make_node(i, LegoKind.BELL) for i in range(k)]
    return TensorNetwork.build(nodes, [((i, 1), (i + 1, 0)) for i in range(k - 1)])


def test_two_bell_costs():
    net = bell_path(2)
    tree = ContractionTree((0, 1))
    assert dense_cost(net, tree).total == 16
    rep = sst_cost(net, tree)
    m = rep.merges[0]
    assert (m.left_rank, m.right_rank, m.stacked_rank, m.cost) == (2, 2, 2, 4)
    assert contract_network(net, tree)[1] == 4


def test_three_node_path_dense():
    net = bell_path(3)
    assert dense_cost(net, ContractionTree(((0, 1), 2))).total == 80


def test_single_leaf_costs_nothing():
    net = TensorNetwork.build([make_node(0, LegoKind.BELL)], [])
    assert dense_cost(net, ContractionTree(0)).total == 0
    assert sst_cost(net, ContractionTree(0)).total == 0


def test_identity_stopper_merge_bounded_by_other_side():
    nodes = [make_node(0, LegoKind.SUB_513), make_node(1, LegoKind.ID_STOPPER)]
    net = TensorNetwork.build(nodes, [((0, 4), (1, 0))])
    m = sst_cost(net, ContractionTree((0, 1))).merges[0]
    assert m.right_rank == 0 and m.cost <= 2**m.left_rank


def test_report_totals_and_json():
    net = desk_network("rsc_3_3")
    tree = random_tree(net, 4)
    for rep in (dense_cost(net, tree), sst_cost(net, tree)):
        assert rep.total == sum(m.cost for m in rep.merges)
        assert json.loads(json.dumps(rep.to_json()))["total"] == rep.total


def test_tree_json_roundtrip():
    tree = random_tree(desk_network("tanner_steane"), 2)
    again = ContractionTree.from_json(json.loads(json.dumps(tree.to_json())))
    assert again == tree


BAD_TREES = [
    ((0, 1), 1),  # duplicate leaf
    (0, 1),  # missing leaves
    ((0, 2), (1, 3)),  # 0 and 2 share no edge
    ((0, 1), (2, 7)),  # unknown id
]


@pytest.mark.parametrize("spec", BAD_TREES)
def test_both_cost_kinds_reject_bad_trees(spec):
    net = bell_path(4)
    for fn in (dense_cost, sst_cost):
        with pytest.raises(TreeMismatchError):
            fn(net, ContractionTree(spec))


def test_tree_json_rejects_garbage():
    with pytest.raises(ContractViolation):
        ContractionTree.from_json([0, [1, 2, 3]])
    with pytest.raises(ContractViolation):
        ContractionTree.from_json(["a", 1])


@pytest.mark.parametrize("seed", range(3))
def test_sst_cost_equals_counted_multiplications(desk_net, seed):
    tree = random_tree(desk_net, 100 + seed)
    assert sst_cost(desk_net, tree).total == contract_network(desk_net, tree)[1]


SMALL = ["concat_rep_3_2", "happy_0", "tanner_422"]


@pytest.mark.parametrize("name", SMALL)
def test_optimal_matches_exhaustive(name):
    net = desk_network(name)
    trees = list(iter_trees(net))
    dense_best = min(dense_cost(net, t).total for t in trees)
    true_best = min(contract_network(net, t)[1] for t in trees)
    assert optimal_tree(net, CostKind.DENSE)[1].total == dense_best
    assert optimal_tree(net, CostKind.SST)[1].total == true_best


def test_iter_trees_counts_path():
    # splits of a 4-path: {0}|{1,2,3} -> 2, {0,1}|{2,3} -> 1, {0,1,2}|{3} -> 2
    assert len(list(iter_trees(bell_path(4)))) == 5


def test_two_node_unique_tree():
    tree, _ = optimal_tree(bell_path(2), CostKind.SST)
    assert tree == ContractionTree((0, 1))


def test_optimal_cap():
    with pytest.raises(ResourceLimitError):
        optimal_tree(desk_network("concat_rep_3_3"), CostKind.SST)


def test_optimal_beats_samples_rsc():
    net = desk_network("rsc_3_3")
    best, rep = optimal_tree(net, CostKind.SST)
    samples = [greedy_sample(net, CostKind.SST, trial_params(5, t))[1].total for t in range(64)]
    assert rep.total <= min(samples) <= 2 * rep.total


def test_greedy_is_deterministic():
    net = desk_network("tanner_steane")
    p = GreedyParams(0.7, 0.3, 1234)
    assert greedy_sample(net, CostKind.SST, p) == greedy_sample(net, CostKind.SST, p)


def test_greedy_params_validated():
    with pytest.raises(ContractViolation):
        GreedyParams(tau=0.0)
    with pytest.raises(ContractViolation):
        GreedyParams(alpha=-1.0)


@pytest.mark.parametrize("rank_size", [False, True])
def test_zero_temperature_picks_argmax(rank_size):
    net = desk_network("rsc_3_3")
    for seed in range(5):
        record = []
        greedy_merges(net, GreedyParams(1.0, 1e-9, seed, rank_size), record)
        assert all(chosen == best for chosen, best, _ in record)


def test_zero_temperature_unique_argmax_is_seed_free():
    net = desk_network("concat_rep_3_2")
    trees = {tuple(greedy_merges(net, GreedyParams(1.0, 1e-9, s))) for s in range(20)}
    record = []
    greedy_merges(net, GreedyParams(1.0, 1e-9, 0), record)
    if all(n == 1 for *_, n in record):
        assert len(trees) == 1


def test_symmetric_pairs_equally_likely():
    net = bell_path(3)
    first_left = 0
    draws = 10_000
    for seed in range(draws):
        a, b = greedy_merges(net, GreedyParams(1.0, 1.0, seed))[0]
        first_left += (a | b) == 0b011
    assert abs(first_left / draws - 0.5) < 0.03


def test_alpha_zero_is_allowed():
    net = desk_network("rsc_3_3")
    tree, rep = greedy_sample(net, CostKind.SST, GreedyParams(0.0, 0.5, 3))
    assert rep.total == sst_cost(net, tree).total


def test_one_trial_equals_greedy_sample():
    net = desk_network("rsc_3_3")
    res = hyper_greedy(net, CostKind.SST, trials=1, master_seed=9)
    tree, rep = greedy_sample(net, CostKind.SST, trial_params(9, 0))
    assert res.tree == tree and res.report == rep and res.deterministic


def test_hyper_greedy_deterministic_across_workers():
    net = desk_network("tanner_422")
    a = hyper_greedy(net, CostKind.SST, trials=6, master_seed=2, threads=1)
    b = hyper_greedy(net, CostKind.SST, trials=6, master_seed=2, threads=2)
    assert a.tree == b.tree and [t.total for t in a.trials] == [t.total for t in b.trials]


def test_wall_clock_mode_flagged():
    res = hyper_greedy(desk_network("tanner_422"), CostKind.DENSE, trials=None, wall_clock=0.05)
    assert not res.deterministic and len(res.trials) >= 1


def test_hyper_greedy_budget_checked():
    with pytest.raises(ContractViolation):
        hyper_greedy(bell_path(2), CostKind.SST, trials=0)


def test_trial_ranges():
    rng = random.Random(0)
    for _ in range(50):
        p = trial_params(rng.randrange(10**9), rng.randrange(1000))
        assert 0 <= p.alpha <= 2 and 1e-2 <= p.tau <= 1


def test_crossover_report():
    assert crossover(7, 1, 816).winner == "brute_force"
    assert crossover(25, 1, 1120).winner == "contraction"
    assert crossover(2, 0, 4).winner == "tie"
    rep = brute_force_crossover(bell_path(2), builtin_code("code422"), best_total=4)
    assert rep.brute_force_cost == 4 and rep.factor == 1.0
