import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sstlego.enumerator import (
    DensityRecord,
    NotACodeEnumerator,
    StateHasNoDistance,
    WeightPolynomial,
    brute_force_tensor_wep,
    brute_force_wep,
    contract_network,
    distance,
    macwilliams_A,
    macwilliams_B,
    nnz_count,
    wep_product,
    wep_self_trace,
    wep_trace,
)
from sstlego.lego import LegoKind
from sstlego.network import TensorNetwork, builtin_code, make_node, network_pcm
from sstlego.schedule import ContractionTree, random_tree
from sstlego.symplectic import (
    ContractViolation,
    ParityCheckMatrix,
    PauliOp,
    ResourceLimitError,
    normalizer,
    packed_weight,
    rank,
    restrict,
    span_elements,
)

from conftest import random_commuting_pcm

P = WeightPolynomial
BELL = ParityCheckMatrix.from_strings(["XX", "ZZ"])


def key(s: str) -> int:
    return PauliOp.from_string(s).packed()


def loop_wep(H):
    counts = {}
    for v in span_elements(H):
        w = packed_weight(v)
        counts[w] = counts.get(w, 0) + 1
    return P(counts)


def test_polynomial_basics():
    a = P({0: 1, 2: 3})
    assert a * a == P({0: 1, 2: 6, 4: 9})
    assert str(a) == "1 + 3z^2"
    assert P.from_json(a.to_json(2, 0)) == a
    assert P({3: 0}) == P()


@pytest.mark.parametrize(
    "rows, expected",
    [
        (["XXXX", "ZZZZ"], {0: 1, 4: 3}),
        (["XX", "ZZ"], {0: 1, 2: 3}),
        (["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], {0: 1, 4: 15}),
    ],
)
def test_brute_force_examples(rows, expected):
    assert brute_force_wep(ParityCheckMatrix.from_strings(rows)) == P(expected)


@settings(max_examples=60)
@given(st.integers(0, 2**32), st.integers(1, 12))
def test_numpy_path_matches_loop(seed, n):
    H = random_commuting_pcm(random.Random(seed), n, n)
    assert brute_force_wep(H) == loop_wep(H)


def test_brute_force_cap():
    H = builtin_code("steane7").pcm
    with pytest.raises(ResourceLimitError):
        brute_force_wep(H, cap_log2=5)


def test_bell_tensor_wep():
    T = brute_force_tensor_wep(BELL, [1])
    assert T.items() == [(key("I"), P({0: 1})), (key("X"), P({1: 1})), (key("Z"), P({1: 1})), (key("Y"), P({1: 1}))]


def test_tensor_wep_special_cases():
    H = builtin_code("code513").pcm
    assert brute_force_tensor_wep(H, []).scalar() == brute_force_wep(H)
    full = brute_force_tensor_wep(H, range(5))
    assert all(p == P({0: 1}) for _, p in full.items())
    assert full.nnz == 16


def test_product_examples():
    s = brute_force_tensor_wep(BELL, [])
    assert wep_product(s, s).scalar() == P({0: 1, 2: 6, 4: 9})
    t1 = brute_force_tensor_wep(BELL, [1], ["a"])
    t2 = brute_force_tensor_wep(BELL, [1], ["b"])
    assert wep_product(t1, t2).nnz == 16
    with pytest.raises(ContractViolation):
        wep_product(t1, t1)


def test_product_with_empty_tensor():
    t = brute_force_tensor_wep(BELL, [1], ["a"])
    empty = type(t)(("b",), {}, ParityCheckMatrix(1, ()), 0, t.slot, 0)
    assert wep_product(t, empty).nnz == 0


def test_bell_trace_counts_four():
    t1 = brute_force_tensor_wep(BELL, [1], ["a"])
    t2 = brute_force_tensor_wep(BELL, [0], ["b"])
    out, mults = wep_trace(t1, t2, [("a", "b")])
    assert out.scalar() == P({0: 1, 2: 3})
    assert mults == 4


def test_identity_stopper_filters():
    H = builtin_code("code513").pcm
    T = brute_force_tensor_wep(H, [0, 1], ["p", "q"])
    stop = brute_force_tensor_wep(ParityCheckMatrix(1, ()), [0], ["s"])
    out, mults = wep_trace(T, stop, [("q", "s")])
    kept = [k for k in T.entries if (k >> 2) & 3 == 0]
    assert mults == len(kept) == out.nnz


def test_trace_rejects_bad_pairs():
    t1 = brute_force_tensor_wep(BELL, [1], ["a"])
    t2 = brute_force_tensor_wep(BELL, [0], ["b"])
    with pytest.raises(ContractViolation):
        wep_trace(t1, t2, [("a", "zz")])


def test_self_trace_examples():
    T = brute_force_tensor_wep(BELL, [0, 1], ["a", "b"])
    out, adds = wep_self_trace(T, "a", "b")
    assert out.scalar() == P({0: 4}) and adds == 4
    T2 = brute_force_tensor_wep(ParityCheckMatrix.from_strings(["XI", "IZ"]), [0, 1], ["a", "b"])
    out2, _ = wep_self_trace(T2, "a", "b")
    assert out2.scalar() == P({0: 1})
    with pytest.raises(ContractViolation):
        wep_self_trace(T, "a", "a")


def test_self_trace_commutes_with_product():
    H = builtin_code("code422").pcm
    T = brute_force_tensor_wep(H, [0, 1], ["a", "b"])
    U = brute_force_tensor_wep(BELL, [0], ["c"])
    left = wep_product(wep_self_trace(T, "a", "b")[0], U)
    right = wep_self_trace(wep_product(T, U), "a", "b")[0]
    assert left.items() == right.items()


@settings(max_examples=200)
@given(st.integers(0, 2**32), st.integers(1, 8), st.data())
def test_nnz_identity_on_leaf_tensors(seed, n, data):
    H = random_commuting_pcm(random.Random(seed), n, n)
    J = sorted(data.draw(st.sets(st.integers(0, n - 1))))
    T = brute_force_tensor_wep(H, J)
    assert T.nnz == nnz_count(H, J)
    assert T.total() == 2 ** rank(H)


def test_nnz_examples():
    assert nnz_count(BELL, [1]) == 4
    assert nnz_count(builtin_code("steane7").pcm, []) == 1


def test_nnz_identity_after_trace(desk_net):
    tree = random_tree(desk_net, 11)
    # re-run the fold by hand to inspect every intermediate tensor
    from sstlego.enumerator import leaf_tensor

    def fold(t):
        if isinstance(t, int):
            return leaf_tensor(desk_net, t)
        a, b = fold(t[0]), fold(t[1])
        right = set(b.open_legs)
        pairs = [(ep, desk_net.partner[ep]) for ep in a.open_legs if desk_net.partner[ep] in right]
        out, _ = wep_trace(a, b, pairs)
        J = list(range(len(out.open_legs)))
        assert out.nnz == nnz_count(out.pcm, J)
        assert len(out.open_legs) + out.closed_leg_count == out.pcm.n
        return out

    fold(tree.root)


@pytest.mark.parametrize(
    "name, B",
    [
        ("code422", {0: 1, 2: 18, 3: 24, 4: 21}),
        ("code513", {0: 1, 3: 30, 4: 15, 5: 18}),
    ],
)
def test_macwilliams_examples(name, B):
    code = builtin_code(name)
    A = brute_force_wep(code.pcm)
    assert macwilliams_B(A, code.n, code.k) == P(B)


def test_macwilliams_trivial_code():
    assert macwilliams_B(P({0: 1}), 1, 1) == P({0: 1, 1: 3})


@pytest.mark.parametrize("name", ["code422", "code513", "steane7", "shor9", "rsc3", "hamming15_7_3"])
def test_macwilliams_against_normalizer(name):
    code = builtin_code(name)
    A = brute_force_wep(code.pcm)
    B = macwilliams_B(A, code.n, code.k)
    assert B == brute_force_wep(normalizer(code.pcm))
    assert macwilliams_A(B, code.n, code.k) == A
    assert all(B[w] >= A[w] for w in range(code.n + 1))


def test_macwilliams_rejects_non_enumerator():
    with pytest.raises(NotACodeEnumerator):
        macwilliams_B(P({0: 1, 1: 1}), 3, 1)
    with pytest.raises(NotACodeEnumerator):
        macwilliams_B(P({0: 2, 4: 2}), 4, 2)


def test_distance_examples():
    assert distance(P({0: 1, 4: 3}), P({0: 1, 2: 18, 3: 24, 4: 21})) == 2
    assert distance(P({0: 1, 4: 15}), P({0: 1, 3: 30, 4: 15, 5: 18})) == 3
    with pytest.raises(StateHasNoDistance):
        distance(P({0: 1, 2: 3}), P({0: 1, 2: 3}))


def test_density_record_bounds():
    r = DensityRecord(2, 4)
    assert r.density == pytest.approx(0.25) and r.decimal == 0.25
    with pytest.raises(ContractViolation):
        DensityRecord(1, 5)


def test_single_node_network():
    net = TensorNetwork.build([make_node(0, LegoKind.SUB_513)], [])
    A, cost, records = contract_network(net, ContractionTree(0))
    assert A == P({0: 1, 4: 15}) and cost == 0
    assert [(r.open_leg_count, r.nnz) for r in records] == [(0, 1)]


def test_loop_excess_is_divided_out():
    # two Bell nodes joined twice form a loop; the scalar is a pure count
    nodes = [make_node(0, LegoKind.BELL), make_node(1, LegoKind.BELL), make_node(2, LegoKind.BITFLIP_REP, 3)]
    edges = [((0, 0), (1, 0)), ((0, 1), (2, 0)), ((1, 1), (2, 1))]
    net = TensorNetwork.build(nodes, edges)
    A, _, _ = contract_network(net, random_tree(net, 0))
    assert A == brute_force_wep(network_pcm(net))


@pytest.mark.parametrize("seed", range(3))
def test_contraction_matches_brute_force(desk_net, seed):
    A, _, records = contract_network(desk_net, random_tree(desk_net, seed))
    assert A == brute_force_wep(network_pcm(desk_net))
    assert all(0 < r.density <= 1 for r in records)


def test_contract_rejects_mismatched_tree():
    net = TensorNetwork.build([make_node(0, LegoKind.BELL), make_node(1, LegoKind.BELL)], [((0, 1), (1, 0))])
    with pytest.raises(ContractViolation):
        contract_network(net, ContractionTree((0, 2)))


def test_restrict_bell_matches_tensor():
    T = brute_force_tensor_wep(BELL, [1])
    assert T.nnz == 2 ** rank(restrict(BELL, [1]))
