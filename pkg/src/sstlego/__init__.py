"""Weight enumerators of stabilizer codes by quantum LEGO contraction."""

from .enumerator import (
    TensorWEP,
    WeightPolynomial,
    brute_force_tensor_wep,
    brute_force_wep,
    contract_network,
    distance,
    macwilliams_B,
    nnz_count,
)
from .network import CodeSpec, TensorNetwork, builtin_code, ingest_code, network_pcm
from .schedule import ContractionTree, CostKind, dense_cost, hyper_greedy, optimal_tree, sst_cost
from .symplectic import ParityCheckMatrix

__all__ = [
    "CodeSpec",
    "ContractionTree",
    "CostKind",
    "ParityCheckMatrix",
    "TensorNetwork",
    "TensorWEP",
    "WeightPolynomial",
    "brute_force_tensor_wep",
    "brute_force_wep",
    "builtin_code",
    "contract_network",
    "dense_cost",
    "distance",
    "hyper_greedy",
    "ingest_code",
    "macwilliams_B",
    "network_pcm",
    "nnz_count",
    "optimal_tree",
    "sst_cost",
]
